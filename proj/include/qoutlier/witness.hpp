#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>

#include "qoutlier/cover.hpp"
#include "qoutlier/qmat.hpp"
#include "qoutlier/sigma_tests.hpp"

namespace qoutlier {

/// Certified outlier inside a projector's image: phi = P psi / |P psi| for
/// the covering point test's psi, with the inequality chain it witnesses.
struct WitnessReport {
    PureState phi;
    std::string test_hash;
    long test_index = -1;     // position in the cover's test list, when known
    double test_value = 0;    // <phi|T|phi>
    double threshold = 0;     // 2^{2m-n-3}
    double deficiency_lb = 0; // log2 test_value - code_length(T)
    long test_code_length = 0;
    long theorem_lhs = 0;     // 3m - 2n
};

WitnessReport extract_witness(const Projector& p, const SigmaTest& t,
                              const CoverParams& params);

/// max over Image(P) of <phi|T|phi>, exactly lambda_max(P T P), with the
/// maximizing unit vector in the image.
std::pair<double, PureState> max_image_value(const Projector& p, const SigmaTest& t);

/// No covering test hit the projector; its residual mass is the certificate.
struct ResidualNotice {
    Rational residual_mass;
    double e_minus_d = 0;
};

using CertifyOutcome = std::variant<WitnessReport, ResidualNotice>;

/// Scan the cover's tests for the first one covering P and extract its
/// witness; otherwise report the residual-mass verdict.
CertifyOutcome certify_outlier(const Projector& p, const CoverResult& cover,
                               const DensityMatrix& sigma, const CoverParams& params);

/// Index i -> i-th approximation, promised within max norm 2^{-i} of the limit.
using ProjectorGenerator = std::function<Projector(long)>;

/// First index where lambda_max(P_i T P_i) is certifiably stable within tol,
/// via the max-norm to operator-norm conversion (factor dim).
std::pair<long, Projector> stabilize_projector(const ProjectorGenerator& gen,
                                               const SigmaTest& t, double tol);

} // namespace qoutlier
