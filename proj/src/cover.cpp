#include "qoutlier/cover.hpp"

#include <algorithm>
#include <cmath>

namespace qoutlier {

double CoverParams::indicator_threshold() const {
    return std::ldexp(1.0, 2 * m - n - 3);
}

long CoverParams::rounds() const {
    const Rational goal = coverage_goal();
    const Rational r = Rational(BigInt(d), 1) / goal;
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    return static_cast<long>(BigInt((num + den - 1) / den));
}

void CoverParams::validate() const {
    if (n < 1 || n > kMaxQubits) throw DomainError("cover params: n out of range");
    if (m < 1 || m > n) throw DomainError("cover params: need 1 <= m <= n");
    if (d < 1) throw DomainError("cover params: d must be positive");
    if (theta <= 0 || theta > Rational(1, 4)) {
        throw DomainError("cover params: theta must lie in (0, 1/4]");
    }
    if (theta * p() >= 1) throw DomainError("cover params: theta * p must be < 1");
    if (round_budget < 1) throw DomainError("cover params: round budget must be positive");
}

bool coverage_indicator(const SigmaTest& t, const Projector& b, const CoverParams& params) {
    if (t.dim() != b.dim()) throw DimensionError("coverage_indicator: dimension mismatch");
    if (b.rank() != (long(1) << params.m)) {
        throw ContractError("coverage_indicator: projector rank is not 2^m");
    }
    const double tr = trace_product(t.entries(), b.entries()).real();
    return tr >= params.indicator_threshold();
}

namespace {

Rational covered_mass_of(const SigmaTest& t, const ElementaryMeasure& q,
                         const ProjectorMap& projectors, const CoverParams& params,
                         std::vector<std::string>* covered_out) {
    Rational mass = 0;
    for (const auto& atom : q.support()) {
        const auto it = projectors.find(atom.id);
        if (it == projectors.end()) {
            throw DomainError("measure id has no projector: " + atom.id);
        }
        if (coverage_indicator(t, it->second, params)) {
            mass += atom.prob;
            if (covered_out) covered_out->push_back(atom.id);
        }
    }
    return mass;
}

} // namespace

RoundTest find_round_test(const DensityMatrix& sigma, const ElementaryMeasure& q_residual,
                          const ProjectorMap& projectors, const CoverParams& params,
                          const RngStream& rng) {
    params.validate();
    const Rational goal = params.coverage_goal();
    std::optional<SigmaTest> best;
    Rational best_mass = -1;
    for (long attempt = 0; attempt < params.round_budget; ++attempt) {
        const PureState psi = haar_sample(params.n, rng.derived(std::uint64_t(attempt)));
        PointTestResult candidate = point_test(psi, params.m, sigma);
        if (!candidate.test) continue; // Tr T sigma > 1, resample
        std::vector<std::string> covered;
        const Rational mass =
            covered_mass_of(*candidate.test, q_residual, projectors, params, &covered);
        if (mass >= goal) {
            return RoundTest{std::move(*candidate.test), mass, std::move(covered), attempt + 1};
        }
        if (mass > best_mass) {
            best_mass = mass;
            best = std::move(candidate.test);
        }
    }
    throw BudgetError("round budget of " + std::to_string(params.round_budget) +
                          " attempts exhausted",
                      std::move(best), best_mass < 0 ? Rational(0) : best_mass);
}

CoverResult run_cover(const DensityMatrix& sigma, const ElementaryMeasure& q,
                      const ProjectorMap& projectors, const CoverParams& params,
                      const RngStream& rng) {
    params.validate();
    for (const auto& atom : q.support()) {
        const auto it = projectors.find(atom.id);
        if (it == projectors.end()) throw DomainError("measure id has no projector: " + atom.id);
        if (it->second.rank() != (long(1) << params.m)) {
            throw ContractError("projector rank is not 2^m: " + atom.id);
        }
        if (it->second.dim() != sigma.dim()) {
            throw DimensionError("projector vs sigma dimension: " + atom.id);
        }
    }

    CoverResult result;
    result.rounds_planned = params.rounds();
    result.residual = q;

    for (long round = 0; round < result.rounds_planned; ++round) {
        std::optional<RoundTest> rt;
        try {
            rt.emplace(find_round_test(sigma, *result.residual, projectors, params,
                                       rng.derived(std::uint64_t(round))));
        } catch (BudgetError& e) {
            e.partial = std::make_shared<CoverResult>(result);
            throw;
        }
        result.tests.push_back(rt->test);
        ++result.rounds_completed;

        const auto& covered = rt->covered_ids;
        auto kept = [&](const std::string& id) {
            return std::find(covered.begin(), covered.end(), id) == covered.end();
        };
        if (covered.size() == result.residual->size()) {
            // everything covered this round
            result.per_round_retained.push_back(0);
            result.residual_mass = 0;
            result.residual.reset();
            break;
        }
        ConditionedMeasure cond = condition_measure(*result.residual, kept);
        result.per_round_retained.push_back(cond.retained_mass);
        result.residual_mass *= cond.retained_mass;
        result.residual = std::move(cond.measure);
    }
    return result;
}

double beta_tail(long a, long b, double x) {
    if (a < 1 || b < 0) throw DomainError("beta_tail: need a >= 1, b >= 0");
    if (b == 0) return x <= 1.0 ? 1.0 : 0.0; // point mass at 1
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    // Pr(Beta(a,b) >= x) = Pr(Binomial(a+b-1, x) <= a-1)
    const long trials = a + b - 1;
    double tail = 0.0;
    for (long j = 0; j < a; ++j) {
        const double log_term = std::lgamma(double(trials + 1)) -
                                std::lgamma(double(j + 1)) -
                                std::lgamma(double(trials - j + 1)) +
                                double(j) * std::log(x) +
                                double(trials - j) * std::log1p(-x);
        tail += std::exp(log_term);
    }
    return std::min(tail, 1.0);
}

MomentReport verify_moments(const DensityMatrix& sigma, const CoverParams& params,
                            long samples, const RngStream& rng,
                            const std::optional<Projector>& b) {
    params.validate();
    if (samples < 1000) throw DomainError("verify_moments: need at least 1000 samples");
    if (sigma.n_qubits() != params.n) throw DimensionError("sigma does not match params.n");

    const Projector i_m = basis_projector(params.n, params.m);
    const Projector& target = b ? *b : i_m;
    if (target.rank() != (long(1) << params.m)) {
        throw ContractError("verify_moments: projector rank is not 2^m");
    }

    const double scale = std::ldexp(1.0, params.m - 2);
    const double threshold = params.indicator_threshold();

    double sum_tr = 0, sum_tr2 = 0;
    double sum_km = 0, sum_km2 = 0;
    long accepted = 0, covered = 0;
    for (long i = 0; i < samples; ++i) {
        const PureState psi = haar_sample(params.n, rng.derived(std::uint64_t(i)));
        const auto& v = psi.amplitudes();
        const double quad_sigma = (v.adjoint() * sigma.entries() * v)(0).real();
        const double tr_t_sigma = scale * quad_sigma;
        sum_tr += tr_t_sigma;
        sum_tr2 += tr_t_sigma * tr_t_sigma;
        if (tr_t_sigma <= 1.0 + 1e-9) ++accepted;

        const double quad_b = (v.adjoint() * target.entries() * v)(0).real();
        if (scale * quad_b >= threshold) ++covered;

        const double quad_im = (v.adjoint() * i_m.entries() * v)(0).real();
        const double km = 1.0 - quad_im;
        sum_km += km;
        sum_km2 += km * km;
    }

    const double ns = double(samples);
    auto stderr_mean = [&](double sum, double sum2) {
        const double mean = sum / ns;
        const double var = std::max(0.0, sum2 / ns - mean * mean);
        return std::sqrt(var / ns);
    };
    auto stderr_frac = [&](double f) { return std::sqrt(std::max(f * (1 - f), 1e-12) / ns); };

    MomentReport report;
    report.samples = samples;
    report.n = params.n;
    report.m = params.m;
    report.mean_tr_t_sigma = sum_tr / ns;
    report.exact_mean_tr_t_sigma = std::ldexp(1.0, params.m - params.n - 2);
    report.stderr_tr_t_sigma = stderr_mean(sum_tr, sum_tr2);
    report.accept_fraction = double(accepted) / ns;
    report.accept_lower_bound = 1.0 - report.exact_mean_tr_t_sigma;
    report.stderr_accept = stderr_frac(report.accept_fraction);
    report.coverage_fraction = double(covered) / ns;
    report.coverage_beta_oracle =
        beta_tail(long(1) << params.m, (long(1) << params.n) - (long(1) << params.m),
                  std::ldexp(1.0, params.m - params.n - 1));
    report.coverage_lower_bound = 0.5 * double(params.p());
    report.stderr_coverage = stderr_frac(report.coverage_fraction);
    report.mean_tr_km_that = sum_km / ns;
    report.exact_tr_km_that = 1.0 - double(params.p());
    report.stderr_km = stderr_mean(sum_km, sum_km2);
    return report;
}

} // namespace qoutlier
