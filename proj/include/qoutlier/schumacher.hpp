#pragma once

#include <cstdint>
#include <utility>

#include "qoutlier/cover.hpp"
#include "qoutlier/qmat.hpp"
#include "qoutlier/witness.hpp"

namespace qoutlier {

/// Parameters of the i.i.d. qubit source demo: sigma = diag(p0, 1-p0)^{tensor k}.
struct TypicalSpec {
    Rational p0;       // larger eigenvalue, in [1/2, 1)
    int k = 1;         // copies
    double delta = 0;  // typicality window around the entropy rate
    int m_target = 0;  // log2 of the padded projector rank

    double entropy() const; // binary entropy of p0, in bits
    void validate() const;
};

double von_neumann_entropy(const DensityMatrix& sigma);

struct TypicalDiagnostics {
    long raw_rank = 0;        // typical states before padding/truncation
    double raw_mass = 0;      // their source probability
    double captured_mass = 0; // Tr(P sigma^{tensor k}) after padding
    int m_target = 0;
};

/// Typical-subspace projector of sigma^{tensor k}, rank padded or truncated
/// to exactly 2^{m_target} in descending-eigenvalue order.
std::pair<Projector, TypicalDiagnostics> typical_projector(const TypicalSpec& spec);

struct DemoReport {
    TypicalSpec spec;
    TypicalDiagnostics diagnostics;
    CoverParams params;
    CoverResult cover;
    CertifyOutcome outcome;
    std::uint64_t seed = 0;
    bool nonvacuous = false; // 3 m_target - 2k > 0
};

/// End-to-end: source -> typical projector -> cover -> outlier certificate.
DemoReport schumacher_demo(const TypicalSpec& spec, long d, const Rational& theta,
                           std::uint64_t seed, long round_budget = 10000);

} // namespace qoutlier
