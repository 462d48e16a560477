#include "doctest.h"

#include <cmath>

#include "qoutlier/cover.hpp"

using namespace qoutlier;

namespace {

PureState basis_state(int n, Eigen::Index index) {
    Vector v = Vector::Zero(Eigen::Index(1) << n);
    v(index) = 1.0;
    return PureState(n, std::move(v));
}

// quadrature route for the Beta tail, independent of the binomial closed form
double beta_tail_quadrature(long a, long b, double x) {
    const long steps = 200000;
    auto density = [&](double t) {
        return std::exp(std::lgamma(double(a + b)) - std::lgamma(double(a)) -
                        std::lgamma(double(b)) + (a - 1) * std::log(t) +
                        (b - 1) * std::log1p(-t));
    };
    double acc = 0.0;
    const double h = (1.0 - x) / steps;
    for (long i = 0; i < steps; ++i) {
        const double lo = x + i * h, hi = lo + h;
        const double mlo = std::min(std::max(lo, 1e-12), 1.0 - 1e-12);
        const double mhi = std::min(std::max(hi, 1e-12), 1.0 - 1e-12);
        acc += 0.5 * (density(mlo) + density(mhi)) * h;
    }
    return acc;
}

} // namespace

TEST_CASE("round count matches the d 2^{n-m+2} formula at theta = 1/4") {
    CoverParams params{4, 3, 3, Rational(1, 4), 10000};
    CHECK(params.rounds() == 24); // 3 * 2^{4-3+2}
    CoverParams other{6, 2, 2, Rational(1, 4), 10000};
    CHECK(other.rounds() == 2L * (1L << (6 - 2 + 2)));
    CoverParams relaxed{4, 3, 3, Rational(1, 8), 10000};
    CHECK(relaxed.rounds() == 48);
    CHECK_THROWS_AS((CoverParams{4, 5, 1, Rational(1, 4), 100}.validate()), DomainError);
    CHECK_THROWS_AS((CoverParams{4, 3, 1, Rational(1, 2), 100}.validate()), DomainError);
}

TEST_CASE("coverage indicator on aligned and orthogonal states") {
    CoverParams params{4, 3, 1, Rational(1, 4), 100};
    const DensityMatrix sigma = maximally_mixed(4);
    const Projector b = basis_projector(4, 3);

    // psi inside Image(B): Tr TB = 2^{m-2} >= 2^{2m-n-3}
    const auto inside = point_test(basis_state(4, 0), 3, sigma);
    REQUIRE(inside.test.has_value());
    CHECK(coverage_indicator(*inside.test, b, params));

    // psi orthogonal to Image(B)
    const auto outside = point_test(basis_state(4, 15), 3, sigma);
    REQUIRE(outside.test.has_value());
    CHECK_FALSE(coverage_indicator(*outside.test, b, params));

    // rank mismatch
    CHECK_THROWS_AS(coverage_indicator(*inside.test, basis_projector(4, 2), params),
                    ContractError);
}

TEST_CASE("coverage probability matches the Beta(2,2) tail at n=2, m=1") {
    CoverParams params{2, 1, 1, Rational(1, 4), 100};
    const DensityMatrix sigma = maximally_mixed(2);
    const Projector b = basis_projector(2, 1);
    const long samples = 100000;
    RngStream rng(19);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const auto pt = point_test(haar_sample(2, rng.derived(i)), 1, sigma);
        REQUIRE(pt.test.has_value());
        if (coverage_indicator(*pt.test, b, params)) ++hits;
    }
    const double fraction = double(hits) / double(samples);
    const double se = std::sqrt(0.84375 * (1 - 0.84375) / samples);
    CHECK(std::abs(fraction - 0.84375) <= 5 * se);
}

TEST_CASE("beta_tail agrees with quadrature and closed forms") {
    CHECK(beta_tail(2, 2, 0.25) == doctest::Approx(0.84375).epsilon(1e-12));
    CHECK(beta_tail(2, 2, 0.25) == doctest::Approx(beta_tail_quadrature(2, 2, 0.25)).epsilon(1e-5));
    CHECK(beta_tail(8, 8, 0.25) ==
          doctest::Approx(beta_tail_quadrature(8, 8, 0.25)).epsilon(1e-5));
    CHECK(beta_tail(1, 3, 0.0) == 1.0);
    CHECK(beta_tail(4, 0, 0.9) == 1.0); // degenerate at 1
}

TEST_CASE("find_round_test succeeds on a singleton at the analytic rate") {
    // per-attempt success means covering the singleton: Pr(Beta(8,8) >= 1/4)
    CoverParams params{4, 3, 1, Rational(1, 4), 10000};
    const DensityMatrix sigma = maximally_mixed(4);
    RngStream rng(29);
    const Projector p = haar_projector(4, 3, rng.derived(999));
    const ElementaryMeasure q({{"P", Rational(1)}});
    const ProjectorMap projectors{{"P", p}};

    const long trials = 10000;
    long successes = 0;
    for (long i = 0; i < trials; ++i) {
        const auto pt = point_test(haar_sample(4, rng.derived(i)), 3, sigma);
        if (!pt.test) continue;
        if (coverage_indicator(*pt.test, p, params)) ++successes;
    }
    const double rate = double(successes) / double(trials);
    // two union-bounded terms: the .5p coverage lower bound times the
    // sigma-test acceptance bound 1 - 2^{m-n-2}
    const double p_cover = 0.5 * double(params.p());
    const double bound = p_cover * (1.0 - std::ldexp(1.0, params.m - params.n - 2));
    const double se = std::sqrt(rate * (1 - rate) / trials);
    CHECK(rate >= bound - 3 * se);

    const RoundTest rt = find_round_test(sigma, q, projectors, params, rng.derived(31));
    CHECK(rt.covered_mass == 1);
    CHECK(rt.covered_ids == std::vector<std::string>{"P"});
}

TEST_CASE("m = n: the first accepted test covers everything") {
    CoverParams params{3, 3, 1, Rational(1, 4), 10000};
    const DensityMatrix sigma = maximally_mixed(3);
    const Projector identity = basis_projector(3, 3);
    const ElementaryMeasure q({{"I", Rational(1)}});
    const ProjectorMap projectors{{"I", identity}};
    const RoundTest rt = find_round_test(sigma, q, projectors, params, RngStream(5));
    CHECK(rt.attempts_used == 1);
    CHECK(rt.covered_mass == 1);
}

TEST_CASE("exhausted budget raises a budget error with the best candidate") {
    CoverParams params{4, 1, 1, Rational(1, 4), 1};
    const DensityMatrix sigma = maximally_mixed(4);
    // a single attempt misses the rank-2 projector a constant fraction of
    // the time, so some seed below must exhaust the budget of 1
    const ProjectorMap projectors{{"A", basis_projector(4, 1)}};
    const ElementaryMeasure q({{"A", Rational(1)}});
    bool threw = false;
    try {
        for (std::uint64_t seed = 0; seed < 64 && !threw; ++seed) {
            const auto rt = find_round_test(sigma, q, projectors, params, RngStream(seed));
            (void)rt;
        }
    } catch (const BudgetError& e) {
        threw = true;
        CHECK(e.best_coverage >= 0);
    }
    CHECK(threw);
}

TEST_CASE("run_cover on a singleton empties the residual") {
    CoverParams params{4, 3, 3, Rational(1, 4), 10000};
    const DensityMatrix sigma = maximally_mixed(4);
    RngStream rng(41);
    const Projector p = haar_projector(4, 3, rng.derived(1000));
    const ElementaryMeasure q({{"P", Rational(1)}});
    const CoverResult result = run_cover(sigma, q, {{"P", p}}, params, rng);
    CHECK(result.residual_mass == 0);
    CHECK_FALSE(result.residual.has_value());
    CHECK(result.rounds_completed == 1);
    CHECK(result.per_round_retained == std::vector<Rational>{Rational(0)});
}

TEST_CASE("run_cover over 16 projectors meets the exact residual certificate") {
    CoverParams params{4, 3, 3, Rational(1, 4), 10000};
    const DensityMatrix sigma = maximally_mixed(4);
    RngStream rng(43);

    ProjectorMap projectors;
    std::vector<std::string> ids;
    for (int i = 0; i < 16; ++i) {
        const std::string id = "B" + std::to_string(i);
        projectors.emplace(id, haar_projector(4, 3, rng.derived(5000 + i)));
        ids.push_back(id);
    }
    const ElementaryMeasure q = ElementaryMeasure::uniform(ids);
    const CoverResult result = run_cover(sigma, q, projectors, params, rng.derived(7));

    // exact product certificate
    Rational product = 1;
    for (const auto& r : result.per_round_retained) {
        CHECK(r <= Rational(7, 8)); // 1 - theta p, so coverage >= theta p held
        product *= r;
    }
    CHECK(result.residual_mass == product);

    Rational limit = 1;
    for (long i = 0; i < result.rounds_completed; ++i) limit *= Rational(7, 8);
    CHECK(result.residual_mass <= limit);

    // post-hoc exhaustive check: everything is covered or in the residual
    for (const auto& id : ids) {
        bool covered = false;
        for (const auto& t : result.tests) {
            if (coverage_indicator(t, projectors.at(id), params)) {
                covered = true;
                break;
            }
        }
        const bool in_residual = result.residual && result.residual->contains(id);
        CHECK((covered || in_residual));
    }
    if (result.residual) {
        CHECK(double(result.residual_mass) <= std::exp(-3.0));
    }
}

TEST_CASE("run_cover is deterministic in the seed") {
    CoverParams params{3, 2, 2, Rational(1, 4), 10000};
    const DensityMatrix sigma = maximally_mixed(3);
    RngStream setup(47);
    ProjectorMap projectors{{"A", haar_projector(3, 2, setup.derived(0))},
                            {"B", haar_projector(3, 2, setup.derived(1))}};
    const ElementaryMeasure q = ElementaryMeasure::uniform({"A", "B"});
    const CoverResult a = run_cover(sigma, q, projectors, params, RngStream(99));
    const CoverResult b = run_cover(sigma, q, projectors, params, RngStream(99));
    REQUIRE(a.tests.size() == b.tests.size());
    for (std::size_t i = 0; i < a.tests.size(); ++i) {
        CHECK(a.tests[i].entries() == b.tests[i].entries());
    }
    CHECK(a.residual_mass == b.residual_mass);
}

TEST_CASE("verify_moments matches the exact first moments") {
    CoverParams params{2, 1, 1, Rational(1, 4), 10000};
    const DensityMatrix sigma = maximally_mixed(2);
    const MomentReport report = verify_moments(sigma, params, 100000, RngStream(53));
    CHECK(report.exact_mean_tr_t_sigma == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(std::abs(report.mean_tr_t_sigma - 0.125) <= 5 * report.stderr_tr_t_sigma);
    // Tr T sigma is constant 1/8 for the mixed state, so acceptance is certain
    CHECK(report.accept_fraction == 1.0);
    CHECK(std::abs(report.coverage_fraction - report.coverage_beta_oracle) <=
          5 * report.stderr_coverage);
    CHECK(report.coverage_fraction >= report.coverage_lower_bound);
    CHECK(std::abs(report.mean_tr_km_that - report.exact_tr_km_that) <= 5 * report.stderr_km);
    CHECK_THROWS_AS(verify_moments(sigma, params, 10, RngStream(1)), DomainError);
}
