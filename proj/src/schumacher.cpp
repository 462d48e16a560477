#include "qoutlier/schumacher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

namespace qoutlier {

double TypicalSpec::entropy() const {
    const double p = double(p0);
    if (p >= 1.0) return 0.0;
    auto h = [](double x) { return x > 0 ? -x * std::log2(x) : 0.0; };
    return h(p) + h(1.0 - p);
}

void TypicalSpec::validate() const {
    if (p0 < Rational(1, 2) || p0 >= 1) {
        throw DomainError("typical spec: p0 must be the larger eigenvalue, in [1/2, 1)");
    }
    if (k < 1 || k > kMaxQubits) throw DomainError("typical spec: k out of range [1, 12]");
    if (delta <= 0) throw DomainError("typical spec: delta must be positive");
    if (m_target < 0 || m_target > k) {
        throw DomainError("typical spec: m_target must lie in [0, k]");
    }
}

double von_neumann_entropy(const DensityMatrix& sigma) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.entries(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < sigma.dim(); ++i) {
        const double lambda = es.eigenvalues()(i);
        if (lambda > 1e-15) s -= lambda * std::log2(lambda);
    }
    return s;
}

std::pair<Projector, TypicalDiagnostics> typical_projector(const TypicalSpec& spec) {
    spec.validate();
    const Eigen::Index dim = Eigen::Index(1) << spec.k;
    const double p = double(spec.p0);
    const double entropy = spec.entropy();

    // sigma^{tensor k} is diagonal in the computational basis; a basis index
    // with j ones has eigenvalue p^{k-j}(1-p)^j
    std::vector<double> eigenvalue(dim);
    std::vector<bool> typical(dim);
    long raw_rank = 0;
    double raw_mass = 0;
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const int ones = std::popcount(std::uint64_t(idx));
        eigenvalue[idx] = std::pow(p, spec.k - ones) * std::pow(1.0 - p, ones);
        const double rate = -std::log2(eigenvalue[idx]) / double(spec.k);
        typical[idx] = std::abs(rate - entropy) <= spec.delta;
        if (typical[idx]) {
            ++raw_rank;
            raw_mass += eigenvalue[idx];
        }
    }

    const long target_rank = long(1) << spec.m_target;
    std::vector<Eigen::Index> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return eigenvalue[a] > eigenvalue[b];
    });

    std::vector<bool> selected(dim, false);
    long selected_count = 0;
    if (raw_rank >= target_rank) {
        // keep the top-eigenvalue typical states
        for (Eigen::Index idx : order) {
            if (selected_count == target_rank) break;
            if (typical[idx]) {
                selected[idx] = true;
                ++selected_count;
            }
        }
    } else {
        for (Eigen::Index idx = 0; idx < dim; ++idx) {
            if (typical[idx]) selected[idx] = true;
        }
        selected_count = raw_rank;
        // pad with the highest-eigenvalue non-typical states
        for (Eigen::Index idx : order) {
            if (selected_count == target_rank) break;
            if (!selected[idx]) {
                selected[idx] = true;
                ++selected_count;
            }
        }
    }

    Matrix proj = Matrix::Zero(dim, dim);
    double captured = 0;
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        if (selected[idx]) {
            proj(idx, idx) = 1.0;
            captured += eigenvalue[idx];
        }
    }
    TypicalDiagnostics diag{raw_rank, raw_mass, captured, spec.m_target};
    return {Projector(std::move(proj)), diag};
}

DemoReport schumacher_demo(const TypicalSpec& spec, long d, const Rational& theta,
                           std::uint64_t seed, long round_budget) {
    spec.validate();
    if (spec.m_target < 1) throw DomainError("schumacher_demo: m_target must be >= 1");

    Matrix source(2, 2);
    source.setZero();
    source(0, 0) = double(spec.p0);
    source(1, 1) = 1.0 - double(spec.p0);
    const DensityMatrix sigma = tensor_power(DensityMatrix(std::move(source)), spec.k);

    auto [projector, diagnostics] = typical_projector(spec);

    CoverParams params;
    params.n = spec.k;
    params.m = spec.m_target;
    params.d = d;
    params.theta = theta;
    params.round_budget = round_budget;
    params.validate();

    DemoReport report{spec, diagnostics, params, {}, ResidualNotice{Rational(1), 0.0}, seed,
                      3L * spec.m_target - 2L * spec.k > 0};

    const ElementaryMeasure q({{std::string("P"), Rational(1)}});
    const ProjectorMap projectors{{std::string("P"), projector}};
    report.cover = run_cover(sigma, q, projectors, params, RngStream(seed));
    report.outcome = certify_outlier(projector, report.cover, sigma, params);
    return report;
}

} // namespace qoutlier
