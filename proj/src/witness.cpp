#include "qoutlier/witness.hpp"

#include <cmath>

#include "qoutlier/serialize.hpp"

namespace qoutlier {

WitnessReport extract_witness(const Projector& p, const SigmaTest& t,
                              const CoverParams& params) {
    if (p.dim() != t.dim()) throw DimensionError("extract_witness: dimension mismatch");
    if (!t.source()) {
        throw ContractError("extract_witness: test carries no defining state");
    }
    if (!coverage_indicator(t, p, params)) {
        throw ContractError("extract_witness: test does not cover the projector");
    }
    const Vector& psi = t.source()->amplitudes();
    Vector projected = p.entries() * psi;
    const double norm = projected.norm();
    if (norm <= 1e-9) throw ContractError("extract_witness: degenerate witness, |P psi| ~ 0");
    projected /= norm;

    WitnessReport report{PureState(p.n_qubits(), std::move(projected)), {}, -1, 0, 0, 0, 0, 0};
    report.test_hash = content_hash(canonical_hermitian_json(t.op()));
    // <phi|T|phi> = 2^{m-2} <psi|P|psi>
    const double quad = (psi.adjoint() * p.entries() * psi)(0).real();
    report.test_value = std::ldexp(1.0, params.m - 2) * quad;
    report.threshold = params.indicator_threshold();
    report.test_code_length = t.code_length();
    report.deficiency_lb = std::log2(report.test_value) - double(t.code_length());
    report.theorem_lhs = 3L * params.m - 2L * params.n;
    return report;
}

std::pair<double, PureState> max_image_value(const Projector& p, const SigmaTest& t) {
    if (p.dim() != t.dim()) throw DimensionError("max_image_value: dimension mismatch");
    if (p.rank() < 1) throw DomainError("max_image_value: zero-rank projector");
    const Matrix ptp = p.entries() * t.entries() * p.entries();
    auto [value, vec] = lambda_max_psd(HermitianOp(Matrix((ptp + ptp.adjoint()) / 2.0)));
    // normalize the maximizer into the image
    Vector in_image = p.entries() * vec;
    if (in_image.norm() <= 1e-9) {
        // T annihilates the image; any image vector attains the zero maximum
        auto [one, basis] = lambda_max_psd(p.base());
        (void)one;
        in_image = p.entries() * basis;
    }
    in_image.normalize();
    return {value, PureState(p.n_qubits(), std::move(in_image))};
}

CertifyOutcome certify_outlier(const Projector& p, const CoverResult& cover,
                               const DensityMatrix& sigma, const CoverParams& params) {
    (void)sigma;
    if (p.rank() != (long(1) << params.m)) {
        throw ContractError("certify_outlier: projector rank is not 2^m");
    }
    for (std::size_t i = 0; i < cover.tests.size(); ++i) {
        if (coverage_indicator(cover.tests[i], p, params)) {
            WitnessReport report = extract_witness(p, cover.tests[i], params);
            report.test_index = long(i);
            return report;
        }
    }
    return ResidualNotice{cover.residual_mass, std::exp(-double(params.d))};
}

std::pair<long, Projector> stabilize_projector(const ProjectorGenerator& gen,
                                               const SigmaTest& t, double tol) {
    if (tol <= 0) throw DomainError("stabilize_projector: tol must be positive");
    constexpr long kMaxIndex = 4096;
    Projector current = gen(0);
    const double dim = double(current.dim());
    const double t_norm = max_norm(t.entries());
    double lambda = lambda_max_psd(HermitianOp(Matrix(
        (current.entries() * t.entries() * current.entries() +
         (current.entries() * t.entries() * current.entries()).adjoint()) / 2.0))).first;
    for (long i = 0; i < kMaxIndex; ++i) {
        Projector next = gen(i + 1);
        if (next.rank() != current.rank()) {
            throw ContractError("stabilize_projector: generator changed rank");
        }
        const double step = max_norm(next.entries() - current.entries());
        if (step > std::ldexp(1.0, int(-i)) + std::ldexp(1.0, int(-(i + 1))) + 1e-12) {
            throw ContractError("stabilize_projector: generator violates the 2^-i contract");
        }
        const Matrix ptp = next.entries() * t.entries() * next.entries();
        const double next_lambda =
            lambda_max_psd(HermitianOp(Matrix((ptp + ptp.adjoint()) / 2.0))).first;
        const double perturbation = 2.0 * dim * std::ldexp(1.0, int(-i)) * t_norm * dim;
        const bool exact_fixpoint = step == 0.0 && std::abs(lambda - next_lambda) == 0.0;
        if (exact_fixpoint || (std::abs(lambda - next_lambda) <= tol && perturbation <= tol)) {
            return {i, current};
        }
        current = std::move(next);
        lambda = next_lambda;
    }
    throw ResourceError("stabilize_projector: no stable index found");
}

} // namespace qoutlier
