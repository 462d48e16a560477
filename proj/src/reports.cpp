#include "qoutlier/reports.hpp"

#include <sstream>

namespace qoutlier {

Json rational_to_json(const Rational& q) {
    return Json{{"den", boost::multiprecision::denominator(q).str()},
                {"num", boost::multiprecision::numerator(q).str()}};
}

Rational rational_from_json(const Json& j) {
    auto piece = [&](const char* key) -> BigInt {
        const auto& v = j.at(key);
        if (v.is_string()) return BigInt(v.get<std::string>());
        return BigInt(v.get<long long>());
    };
    const BigInt den = piece("den");
    if (den == 0) throw IoError("rational with zero denominator");
    return Rational(piece("num"), den);
}

std::string test_to_canonical_json(const SigmaTest& t) {
    const std::string base = canonical_hermitian_json(t.op());
    // splice the extra keys into the key-sorted object
    std::string out = "{\"code_length\":" + std::to_string(t.code_length()) + ",";
    out += base.substr(1, base.size() - 2); // entries, kind, n_qubits
    out += ",\"provenance\":\"" + provenance_name(t.provenance()) + "\"";
    out += ",\"sigma_hash\":\"" + t.sigma_hash() + "\"";
    if (t.source()) {
        const std::string state = canonical_state_json(*t.source());
        const auto start = state.find('[');
        const auto stop = state.find("],\"kind\"");
        out += ",\"source\":" + state.substr(start, stop + 1 - start);
    }
    out += "}";
    return out;
}

SigmaTest test_from_json(const Json& j, const DensityMatrix& sigma) {
    HermitianOp op = parse_hermitian(j);
    const long code_length = j.at("code_length").get<long>();
    const Provenance prov = provenance_from_name(j.at("provenance").get<std::string>());
    const std::string expected_hash = content_hash(canonical_density_json(sigma));
    if (j.contains("sigma_hash") && j.at("sigma_hash").get<std::string>() != expected_hash) {
        throw IoError("test was validated against a different sigma");
    }
    std::optional<PureState> source;
    if (j.contains("source")) {
        const auto& e = j.at("source");
        Vector v(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            v(Eigen::Index(i)) = Complex(e.at(i).at(0).get<double>(), e.at(i).at(1).get<double>());
        }
        source.emplace(op.n_qubits(), std::move(v));
    }
    return SigmaTest(std::move(op), code_length, prov, sigma, std::move(source));
}

std::pair<ElementaryMeasure, CodeLengthTable> measure_from_json(const Json& j) {
    if (!j.contains("support") || !j.at("support").is_array()) {
        throw IoError("measure file needs a 'support' array");
    }
    std::vector<ElementaryMeasure::Atom> atoms;
    std::map<std::string, long> lengths;
    for (const auto& entry : j.at("support")) {
        const std::string id = entry.at("id").get<std::string>();
        auto piece = [&](const char* key) -> BigInt {
            const auto& v = entry.at(key);
            if (v.is_string()) return BigInt(v.get<std::string>());
            return BigInt(v.get<long long>());
        };
        const BigInt den = piece("den");
        if (den == 0) throw IoError("measure atom with zero denominator: " + id);
        atoms.push_back({id, Rational(piece("num"), den)});
        lengths[id] = entry.value("codelen", 0L);
    }
    ElementaryMeasure measure(std::move(atoms));
    // absent codelen entries fall back to the Kraft-safe Shannon code
    const CodeLengthTable defaults = default_code_table(measure);
    for (auto& [id, len] : lengths) {
        if (len <= 0) len = defaults.length(id);
    }
    return {std::move(measure), CodeLengthTable(std::move(lengths))};
}

Json cover_result_to_json(const CoverResult& result, const CoverParams& params,
                          std::uint64_t seed, const std::vector<std::string>& test_files,
                          const std::vector<std::string>& test_hashes) {
    Json tests = Json::array();
    for (std::size_t i = 0; i < test_files.size(); ++i) {
        tests.push_back(Json{{"file", test_files[i]}, {"hash", test_hashes[i]}});
    }
    Json retained = Json::array();
    for (const auto& r : result.per_round_retained) retained.push_back(rational_to_json(r));
    Json residual;
    if (result.residual) {
        Json support = Json::array();
        for (const auto& atom : result.residual->support()) {
            support.push_back(Json{
                {"den", boost::multiprecision::denominator(atom.prob).str()},
                {"id", atom.id},
                {"num", boost::multiprecision::numerator(atom.prob).str()}});
        }
        residual = Json{{"support", std::move(support)}};
    }
    return Json{{"params",
                 Json{{"budget", params.round_budget},
                      {"d", params.d},
                      {"m", params.m},
                      {"n", params.n},
                      {"theta", rational_to_json(params.theta)}}},
                {"per_round_retained", std::move(retained)},
                {"residual", std::move(residual)},
                {"residual_mass", rational_to_json(result.residual_mass)},
                {"rounds_completed", result.rounds_completed},
                {"rounds_planned", result.rounds_planned},
                {"seed", seed},
                {"tests", std::move(tests)}};
}

std::pair<CoverResult, CoverParams> cover_from_json(const Json& j, const std::string& base_dir,
                                                    const DensityMatrix& sigma) {
    CoverParams params;
    const auto& pj = j.at("params");
    params.n = pj.at("n").get<int>();
    params.m = pj.at("m").get<int>();
    params.d = pj.at("d").get<long>();
    params.theta = rational_from_json(pj.at("theta"));
    params.round_budget = pj.at("budget").get<long>();
    params.validate();

    CoverResult result;
    result.rounds_planned = j.at("rounds_planned").get<long>();
    result.rounds_completed = j.at("rounds_completed").get<long>();
    result.residual_mass = rational_from_json(j.at("residual_mass"));
    for (const auto& r : j.at("per_round_retained")) {
        result.per_round_retained.push_back(rational_from_json(r));
    }
    if (!j.at("residual").is_null()) {
        std::vector<ElementaryMeasure::Atom> atoms;
        for (const auto& entry : j.at("residual").at("support")) {
            atoms.push_back({entry.at("id").get<std::string>(),
                             Rational(BigInt(entry.at("num").get<std::string>()),
                                      BigInt(entry.at("den").get<std::string>()))});
        }
        result.residual.emplace(std::move(atoms));
    }
    for (const auto& entry : j.at("tests")) {
        const std::string path = base_dir + "/" + entry.at("file").get<std::string>();
        result.tests.push_back(test_from_json(load_json_file(path), sigma));
    }
    return {std::move(result), params};
}

Json witness_report_to_json(const WitnessReport& report) {
    return Json{{"deficiency_lb", report.deficiency_lb},
                {"phi", Json::parse(canonical_state_json(report.phi))},
                {"test_code_length", report.test_code_length},
                {"test_hash", report.test_hash},
                {"test_index", report.test_index},
                {"test_value", report.test_value},
                {"theorem_lhs", report.theorem_lhs},
                {"threshold", report.threshold},
                {"verdict", "witness"}};
}

Json residual_notice_to_json(const ResidualNotice& notice) {
    return Json{{"e_minus_d", notice.e_minus_d},
                {"residual_mass", rational_to_json(notice.residual_mass)},
                {"verdict", "residual"}};
}

Json certify_outcome_to_json(const CertifyOutcome& outcome) {
    if (std::holds_alternative<WitnessReport>(outcome)) {
        return witness_report_to_json(std::get<WitnessReport>(outcome));
    }
    return residual_notice_to_json(std::get<ResidualNotice>(outcome));
}

Json moment_report_to_json(const MomentReport& r) {
    return Json{{"accept_fraction", r.accept_fraction},
                {"accept_lower_bound", r.accept_lower_bound},
                {"coverage_beta_oracle", r.coverage_beta_oracle},
                {"coverage_fraction", r.coverage_fraction},
                {"coverage_lower_bound", r.coverage_lower_bound},
                {"exact_mean_tr_t_sigma", r.exact_mean_tr_t_sigma},
                {"exact_tr_km_that", r.exact_tr_km_that},
                {"m", r.m},
                {"mean_tr_km_that", r.mean_tr_km_that},
                {"mean_tr_t_sigma", r.mean_tr_t_sigma},
                {"n", r.n},
                {"samples", r.samples},
                {"stderr_accept", r.stderr_accept},
                {"stderr_coverage", r.stderr_coverage},
                {"stderr_km", r.stderr_km},
                {"stderr_tr_t_sigma", r.stderr_tr_t_sigma}};
}

std::string moment_report_to_csv(const MomentReport& r) {
    std::ostringstream out;
    out << "metric,empirical,reference,stderr\n";
    out << "mean_tr_t_sigma," << canonical_real(r.mean_tr_t_sigma) << ","
        << canonical_real(r.exact_mean_tr_t_sigma) << ","
        << canonical_real(r.stderr_tr_t_sigma) << "\n";
    out << "accept_fraction," << canonical_real(r.accept_fraction) << ","
        << canonical_real(r.accept_lower_bound) << "," << canonical_real(r.stderr_accept)
        << "\n";
    out << "coverage_fraction," << canonical_real(r.coverage_fraction) << ","
        << canonical_real(r.coverage_beta_oracle) << "," << canonical_real(r.stderr_coverage)
        << "\n";
    out << "mean_tr_km_that," << canonical_real(r.mean_tr_km_that) << ","
        << canonical_real(r.exact_tr_km_that) << "," << canonical_real(r.stderr_km) << "\n";
    return out.str();
}

Json demo_report_to_json(const DemoReport& report) {
    const std::vector<std::string> no_files;
    Json tests = Json::array();
    for (const auto& t : report.cover.tests) {
        tests.push_back(Json{{"code_length", t.code_length()},
                             {"hash", content_hash(canonical_hermitian_json(t.op()))}});
    }
    Json cover = cover_result_to_json(report.cover, report.params, report.seed, {}, {});
    cover["tests"] = std::move(tests);
    return Json{{"captured_mass", report.diagnostics.captured_mass},
                {"cover", std::move(cover)},
                {"entropy", report.spec.entropy()},
                {"k", report.spec.k},
                {"m_target", report.spec.m_target},
                {"nonvacuous", report.nonvacuous},
                {"outcome", certify_outcome_to_json(report.outcome)},
                {"p0", rational_to_json(report.spec.p0)},
                {"raw_typical_mass", report.diagnostics.raw_mass},
                {"raw_typical_rank", report.diagnostics.raw_rank},
                {"seed", report.seed},
                {"theorem_lhs", 3L * report.spec.m_target - 2L * report.spec.k},
                {"typicality_delta", report.spec.delta}};
}

} // namespace qoutlier
