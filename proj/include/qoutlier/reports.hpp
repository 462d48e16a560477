#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qoutlier/cover.hpp"
#include "qoutlier/schumacher.hpp"
#include "qoutlier/serialize.hpp"
#include "qoutlier/witness.hpp"

namespace qoutlier {

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// Test file: the canonical Hermitian JSON plus code_length / provenance /
/// sigma_hash (and the defining state for point tests).
std::string test_to_canonical_json(const SigmaTest& t);
SigmaTest test_from_json(const Json& j, const DensityMatrix& sigma);

std::pair<ElementaryMeasure, CodeLengthTable> measure_from_json(const Json& j);

Json cover_result_to_json(const CoverResult& result, const CoverParams& params,
                          std::uint64_t seed, const std::vector<std::string>& test_files,
                          const std::vector<std::string>& test_hashes);

/// Reload a cover result; test files are resolved relative to base_dir.
std::pair<CoverResult, CoverParams> cover_from_json(const Json& j, const std::string& base_dir,
                                                    const DensityMatrix& sigma);

Json witness_report_to_json(const WitnessReport& report);
Json residual_notice_to_json(const ResidualNotice& notice);
Json certify_outcome_to_json(const CertifyOutcome& outcome);

Json moment_report_to_json(const MomentReport& report);
std::string moment_report_to_csv(const MomentReport& report);

Json demo_report_to_json(const DemoReport& report);

} // namespace qoutlier
