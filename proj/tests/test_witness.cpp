#include "doctest.h"

#include <cmath>
#include <random>

#include "qoutlier/witness.hpp"

using namespace qoutlier;

namespace {

PureState basis_state(int n, Eigen::Index index) {
    Vector v = Vector::Zero(Eigen::Index(1) << n);
    v(index) = 1.0;
    return PureState(n, std::move(v));
}

PureState uniform_state(int n) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    Vector v = Vector::Ones(dim) / std::sqrt(double(dim));
    return PureState(n, std::move(v));
}

} // namespace

TEST_CASE("extract_witness projects and normalizes") {
    CoverParams params{2, 1, 1, Rational(1, 4), 100};
    const DensityMatrix sigma = maximally_mixed(2);
    const Projector p = basis_projector(2, 1); // diag(1,1,0,0)
    const auto pt = point_test(uniform_state(2), 1, sigma);
    REQUIRE(pt.test.has_value());
    const WitnessReport report = extract_witness(p, *pt.test, params);

    Vector expected(4);
    expected << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0, 0.0;
    CHECK((report.phi.amplitudes() - expected).norm() <= 1e-12);
    // membership and threshold invariants
    CHECK((p.entries() * report.phi.amplitudes() - report.phi.amplitudes()).norm() <= 1e-8);
    CHECK(report.test_value >= report.threshold - 1e-12);
    CHECK(report.theorem_lhs == 3 * 1 - 2 * 2);
}

TEST_CASE("a state already inside the image is its own witness") {
    CoverParams params{3, 2, 1, Rational(1, 4), 100};
    const DensityMatrix sigma = maximally_mixed(3);
    const Projector p = basis_projector(3, 2);
    const PureState psi = basis_state(3, 1);
    const auto pt = point_test(psi, 2, sigma);
    REQUIRE(pt.test.has_value());
    const WitnessReport report = extract_witness(p, *pt.test, params);
    CHECK((report.phi.amplitudes() - psi.amplitudes()).norm() <= 1e-12);
    CHECK(report.test_value == doctest::Approx(std::ldexp(1.0, params.m - 2)).epsilon(1e-12));
}

TEST_CASE("test_value equals the direct quadratic form on Haar inputs") {
    CoverParams params{4, 3, 1, Rational(1, 4), 100};
    const DensityMatrix sigma = maximally_mixed(4);
    RngStream rng(61);
    const Projector p = haar_projector(4, 3, rng.derived(0));
    for (int i = 1; i <= 20; ++i) {
        const auto pt = point_test(haar_sample(4, rng.derived(i)), 3, sigma);
        REQUIRE(pt.test.has_value());
        if (!coverage_indicator(*pt.test, p, params)) continue;
        const WitnessReport report = extract_witness(p, *pt.test, params);
        const Vector& phi = report.phi.amplitudes();
        const double direct = (phi.adjoint() * pt.test->entries() * phi)(0).real();
        CHECK(std::abs(report.test_value - direct) <= 1e-9);
        CHECK(report.test_value >= params.indicator_threshold() - 1e-12);
    }
}

TEST_CASE("extract_witness enforces its preconditions") {
    CoverParams params{2, 1, 1, Rational(1, 4), 100};
    const DensityMatrix sigma = maximally_mixed(2);
    const Projector p = basis_projector(2, 1);
    // test whose state is orthogonal to the image does not cover
    const auto pt = point_test(basis_state(2, 3), 1, sigma);
    REQUIRE(pt.test.has_value());
    CHECK_THROWS_AS(extract_witness(p, *pt.test, params), ContractError);
    // test without a defining state
    SigmaTest anon(HermitianOp(pt.test->entries()), 8, Provenance::external, sigma);
    CHECK_THROWS_AS(extract_witness(p, anon, params), ContractError);
}

TEST_CASE("max_image_value on commuting diagonal cases") {
    const DensityMatrix sigma = maximally_mixed(2);
    Matrix t = Matrix::Zero(4, 4);
    t(0, 0) = 0.5;
    const SigmaTest half(HermitianOp(t), 8, Provenance::external, sigma);
    const Projector p = basis_projector(2, 1);
    const auto [value, vec] = max_image_value(p, half);
    CHECK(value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(vec.amplitudes()(0)) == doctest::Approx(1.0).epsilon(1e-9));

    // T acting outside the image
    Matrix t2 = Matrix::Zero(4, 4);
    t2(3, 3) = 0.5;
    const SigmaTest outside(HermitianOp(t2), 8, Provenance::external, sigma);
    const auto [zero, inside_vec] = max_image_value(p, outside);
    CHECK(std::abs(zero) <= 1e-12);
    CHECK((p.entries() * inside_vec.amplitudes() - inside_vec.amplitudes()).norm() <= 1e-8);
}

TEST_CASE("max_image_value dominates the witness and a Monte Carlo scan") {
    CoverParams params{4, 3, 1, Rational(1, 4), 100};
    const DensityMatrix sigma = maximally_mixed(4);
    RngStream rng(67);
    const Projector p = haar_projector(4, 3, rng.derived(0));
    const auto pt = [&] {
        for (int i = 1;; ++i) {
            auto candidate = point_test(haar_sample(4, rng.derived(i)), 3, sigma);
            if (candidate.test && coverage_indicator(*candidate.test, p, params)) {
                return std::move(*candidate.test);
            }
        }
    }();
    const auto [lambda, maximizer] = max_image_value(p, pt);
    const WitnessReport report = extract_witness(p, pt, params);
    CHECK(lambda >= report.test_value - 1e-9);

    // rank-1 closed form: lambda_max(P T P) = 2^{m-2} |P psi|^2, attained by
    // the witness itself
    REQUIRE(pt.source().has_value());
    const double pnorm2 = (p.entries() * pt.source()->amplitudes()).squaredNorm();
    CHECK(lambda == doctest::Approx(std::ldexp(1.0, params.m - 2) * pnorm2).epsilon(1e-10));
    CHECK(std::abs(lambda - report.test_value) <= 1e-9);
    // the returned maximizer attains lambda
    const Vector& mv = maximizer.amplitudes();
    CHECK((mv.adjoint() * pt.entries() * mv)(0).real() == doctest::Approx(lambda).epsilon(1e-9));

    // random scan over Image(P) lower-bounds lambda
    double best = 0;
    for (int i = 0; i < 20000; ++i) {
        Vector v = p.entries() * haar_sample(4, rng.derived(1000000 + i)).amplitudes();
        const double norm = v.norm();
        if (norm < 1e-12) continue;
        v /= norm;
        best = std::max(best, (v.adjoint() * pt.entries() * v)(0).real());
    }
    CHECK(lambda >= best - 1e-12);
}

TEST_CASE("certify_outlier picks the first covering test or reports residual") {
    CoverParams params{4, 3, 3, Rational(1, 4), 10000};
    const DensityMatrix sigma = maximally_mixed(4);
    RngStream rng(71);
    const Projector p = haar_projector(4, 3, rng.derived(0));
    const ElementaryMeasure q({{"P", Rational(1)}});
    const CoverResult cover = run_cover(sigma, q, {{"P", p}}, params, rng.derived(1));

    const CertifyOutcome outcome = certify_outlier(p, cover, sigma, params);
    REQUIRE(std::holds_alternative<WitnessReport>(outcome));
    const auto& report = std::get<WitnessReport>(outcome);
    CHECK(report.test_index >= 0);
    CHECK(report.test_value >= 0.5 - 1e-12); // 2^{2m-n-3} at n=4, m=3
    CHECK((p.entries() * report.phi.amplitudes() - report.phi.amplitudes()).norm() <= 1e-8);

    // m = 1: a projector orthogonal to every test state sees only the residual
    CoverParams small{2, 1, 1, Rational(1, 4), 100};
    CoverResult empty_cover;
    empty_cover.residual_mass = Rational(1, 3);
    const CertifyOutcome notice =
        certify_outlier(basis_projector(2, 1), empty_cover, maximally_mixed(2), small);
    REQUIRE(std::holds_alternative<ResidualNotice>(notice));
    CHECK(std::get<ResidualNotice>(notice).residual_mass == Rational(1, 3));

    CHECK_THROWS_AS(certify_outlier(basis_projector(4, 2), cover, sigma, params), ContractError);
}

TEST_CASE("stabilize_projector: constant sequence stops at index 0") {
    const DensityMatrix sigma = maximally_mixed(2);
    const Projector p = basis_projector(2, 1);
    Matrix t = Matrix::Zero(4, 4);
    t(0, 0) = 0.5;
    const SigmaTest test(HermitianOp(t), 8, Provenance::external, sigma);
    const auto [index, stable] = stabilize_projector([&](long) { return p; }, test, 1.0);
    CHECK(index == 0);
    CHECK(max_norm(stable.entries() - p.entries()) == 0.0);
}

TEST_CASE("stabilize_projector on a rotating sequence meets its certificate") {
    const DensityMatrix sigma = maximally_mixed(2);
    Matrix t = Matrix::Zero(4, 4);
    t(0, 0) = 0.5;
    t(2, 2) = 0.25;
    const SigmaTest test(HermitianOp(t), 8, Provenance::external, sigma);

    // P_i rotates the plane span(e0, e2) by an angle shrinking as 2^{-i-2}
    auto rotated = [](long i) {
        const double angle = std::ldexp(1.0, int(-i - 2));
        Matrix u = Matrix::Identity(4, 4);
        u(0, 0) = std::cos(angle);
        u(0, 2) = -std::sin(angle);
        u(2, 0) = std::sin(angle);
        u(2, 2) = std::cos(angle);
        Matrix base = Matrix::Zero(4, 4);
        base(0, 0) = 1.0;
        base(1, 1) = 1.0;
        return Projector(Matrix(u * base * u.adjoint()));
    };
    const double tol = 1e-4;
    const auto [index, stable] = stabilize_projector(rotated, test, tol);

    // dense eigensolve oracle at the returned index and three later
    auto lambda_at = [&](long i) {
        const Projector p = rotated(i);
        const Matrix ptp = p.entries() * test.entries() * p.entries();
        return lambda_max_psd(HermitianOp(Matrix((ptp + ptp.adjoint()) / 2.0))).first;
    };
    CHECK(std::abs(lambda_at(index) - lambda_at(index + 3)) <= tol);
    // the certified perturbation bound held at the stop index
    CHECK(2.0 * 4.0 * std::ldexp(1.0, int(-index)) * max_norm(test.entries()) * 4.0 <= tol);
}

TEST_CASE("stabilize_projector rejects contract violations") {
    const DensityMatrix sigma = maximally_mixed(2);
    Matrix t = Matrix::Zero(4, 4);
    t(0, 0) = 0.5;
    const SigmaTest test(HermitianOp(t), 8, Provenance::external, sigma);

    // rank change
    auto rank_change = [](long i) {
        return basis_projector(2, i == 0 ? 1 : 2);
    };
    CHECK_THROWS_AS(stabilize_projector(rank_change, test, 1e-3), ContractError);

    // jump larger than the promised 2^{-i}
    auto jumpy = [](long i) {
        if (i % 2 == 0) return basis_projector(2, 1);
        Matrix p = Matrix::Zero(4, 4);
        p(2, 2) = 1.0;
        p(3, 3) = 1.0;
        return Projector(std::move(p));
    };
    CHECK_THROWS_AS(stabilize_projector(jumpy, test, 1e-9), ContractError);
}
