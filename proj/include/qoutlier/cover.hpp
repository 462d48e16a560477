#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qoutlier/measures.hpp"
#include "qoutlier/qmat.hpp"
#include "qoutlier/sigma_tests.hpp"

namespace qoutlier {

struct CoverParams {
    int n = 0;
    int m = 0;
    long d = 1;                 // deficiency target
    Rational theta = Rational(1, 4);
    long round_budget = 10000;  // sampling attempts per round

    Rational p() const { return pow2(long(m) - long(n)); }
    Rational coverage_goal() const { return theta * p(); }
    double indicator_threshold() const; // 2^{2m-n-3}

    /// ceil(d / (theta p)); equals d 2^{n-m+2} at theta = 1/4.
    long rounds() const;

    void validate() const;
};

struct CoverResult;

/// Per-round sampling budget ran out (exit 3). Carries the best candidate
/// seen and, when thrown from run_cover, the partial result.
struct BudgetError : Error {
    BudgetError(const std::string& msg, std::optional<SigmaTest> best,
                Rational best_coverage_in)
        : Error(msg), best_candidate(std::move(best)),
          best_coverage(std::move(best_coverage_in)) {}

    std::optional<SigmaTest> best_candidate;
    Rational best_coverage;
    std::shared_ptr<CoverResult> partial;
};

using ProjectorMap = std::map<std::string, Projector>;

/// 1 iff Tr(T B) >= 2^{2m-n-3}.
bool coverage_indicator(const SigmaTest& t, const Projector& b, const CoverParams& params);

struct RoundTest {
    SigmaTest test;
    Rational covered_mass;              // against the (normalized) residual
    std::vector<std::string> covered_ids;
    long attempts_used = 0;
};

/// Rejection-sample point tests until one both passes the σ-test check and
/// covers at least theta*p of the residual Q-mass.
RoundTest find_round_test(const DensityMatrix& sigma, const ElementaryMeasure& q_residual,
                          const ProjectorMap& projectors, const CoverParams& params,
                          const RngStream& rng);

struct CoverResult {
    std::vector<SigmaTest> tests;
    std::vector<Rational> per_round_retained; // unnormalized shrink per round
    std::optional<ElementaryMeasure> residual;
    Rational residual_mass = 1;
    long rounds_planned = 0;
    long rounds_completed = 0;
};

/// The round loop of the covering procedure: residual_mass is the exact
/// product of per-round retained fractions and ends below (1-theta p)^R.
CoverResult run_cover(const DensityMatrix& sigma, const ElementaryMeasure& q,
                      const ProjectorMap& projectors, const CoverParams& params,
                      const RngStream& rng);

struct MomentReport {
    long samples = 0;
    int n = 0, m = 0;
    // E[Tr T sigma] vs the exact 2^{m-n-2}
    double mean_tr_t_sigma = 0, exact_mean_tr_t_sigma = 0, stderr_tr_t_sigma = 0;
    // fraction of accepted point tests vs the 1 - 2^{m-n-2} lower bound
    double accept_fraction = 0, accept_lower_bound = 0, stderr_accept = 0;
    // Pr(Tr B T >= 2^{2m-n-3}) vs the Beta tail oracle and the .5p bound
    double coverage_fraction = 0, coverage_beta_oracle = 0, coverage_lower_bound = 0,
           stderr_coverage = 0;
    // E[Tr K_m T_hat] vs the exact 1 - p
    double mean_tr_km_that = 0, exact_tr_km_that = 0, stderr_km = 0;
};

/// Exact tail Pr(Beta(a, b) >= x) for integer a >= 1, b >= 0.
double beta_tail(long a, long b, double x);

/// Monte Carlo check of every probability identity the round bound rests on.
MomentReport verify_moments(const DensityMatrix& sigma, const CoverParams& params,
                            long samples, const RngStream& rng,
                            const std::optional<Projector>& b = {});

} // namespace qoutlier
