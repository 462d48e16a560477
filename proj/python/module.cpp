// Python bindings for the covering/outlier pipeline. Rationals cross the
// boundary as "num/den" strings so exactness survives where it matters.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qoutlier/reports.hpp"
#include "qoutlier/schumacher.hpp"
#include "qoutlier/witness.hpp"

namespace py = pybind11;
using namespace qoutlier;

namespace {

std::string rat(const Rational& q) { return rational_to_string(q); }

py::dict witness_dict(const WitnessReport& w) {
    py::dict out;
    out["phi"] = Vector(w.phi.amplitudes());
    out["test_hash"] = w.test_hash;
    out["test_index"] = w.test_index;
    out["test_value"] = w.test_value;
    out["threshold"] = w.threshold;
    out["deficiency_lb"] = w.deficiency_lb;
    out["test_code_length"] = w.test_code_length;
    out["theorem_lhs"] = w.theorem_lhs;
    return out;
}

py::dict cover_dict(const CoverResult& r) {
    py::dict out;
    py::list tests;
    for (const auto& t : r.tests) {
        py::dict entry;
        entry["entries"] = Matrix(t.entries());
        entry["code_length"] = t.code_length();
        entry["tr_sigma"] = t.tr_sigma();
        tests.append(entry);
    }
    out["tests"] = tests;
    py::list retained;
    for (const auto& q : r.per_round_retained) retained.append(rat(q));
    out["per_round_retained"] = retained;
    out["residual_mass"] = rat(r.residual_mass);
    out["residual_mass_float"] = double(r.residual_mass);
    out["rounds_planned"] = r.rounds_planned;
    out["rounds_completed"] = r.rounds_completed;
    return out;
}

CoverParams make_params(int n, int m, long d, const std::string& theta, long budget) {
    CoverParams params{n, m, d, parse_rational(theta), budget};
    params.validate();
    return params;
}

} // namespace

PYBIND11_MODULE(_qoutlier, mod) {
    mod.doc() = "randomized covering procedure and outlier witnesses";

    py::register_exception<ContractError>(mod, "ContractError");
    py::register_exception<IoError>(mod, "IoError");

    mod.def(
        "haar_sample",
        [](int n_qubits, std::uint64_t seed, long index) {
            return Vector(haar_sample(n_qubits, RngStream(seed).derived(index)).amplitudes());
        },
        py::arg("n_qubits"), py::arg("seed"), py::arg("index") = 0);

    mod.def(
        "haar_projector",
        [](int n_qubits, int m, std::uint64_t seed) {
            return Matrix(haar_projector(n_qubits, m, RngStream(seed)).entries());
        },
        py::arg("n_qubits"), py::arg("m"), py::arg("seed"));

    mod.def(
        "von_neumann_entropy",
        [](const Matrix& sigma) { return von_neumann_entropy(DensityMatrix(sigma)); },
        py::arg("sigma"));

    mod.def(
        "point_test",
        [](const Vector& psi, int m, const Matrix& sigma) {
            const DensityMatrix rho(sigma);
            const auto result =
                point_test(PureState(qubits_for_dim(psi.size()), psi), m, rho);
            py::dict out;
            out["accepted"] = result.test.has_value();
            out["tr_t_sigma"] = result.tr_t_sigma;
            if (result.test) out["entries"] = Matrix(result.test->entries());
            return out;
        },
        py::arg("psi"), py::arg("m"), py::arg("sigma"));

    mod.def(
        "verify_moments",
        [](const Matrix& sigma, int m, long samples, std::uint64_t seed) {
            const DensityMatrix rho(sigma);
            const CoverParams params =
                make_params(qubits_for_dim(rho.dim()), m, 1, "1/4", 10000);
            const MomentReport report =
                verify_moments(rho, params, samples, RngStream(seed));
            py::dict out;
            const Json j = moment_report_to_json(report);
            for (const auto& [key, value] : j.items()) {
                if (value.is_number_integer()) {
                    out[key.c_str()] = value.get<long>();
                } else {
                    out[key.c_str()] = value.get<double>();
                }
            }
            return out;
        },
        py::arg("sigma"), py::arg("m"), py::arg("samples"), py::arg("seed"));

    mod.def(
        "run_cover",
        [](const Matrix& sigma, const std::map<std::string, Matrix>& projectors, int m,
           long d, const std::string& theta, long budget, std::uint64_t seed) {
            const DensityMatrix rho(sigma);
            const CoverParams params =
                make_params(qubits_for_dim(rho.dim()), m, d, theta, budget);
            ProjectorMap map;
            std::vector<std::string> ids;
            for (const auto& [id, entries] : projectors) {
                map.emplace(id, Projector(entries));
                ids.push_back(id);
            }
            return cover_dict(
                run_cover(rho, ElementaryMeasure::uniform(ids), map, params, RngStream(seed)));
        },
        py::arg("sigma"), py::arg("projectors"), py::arg("m"), py::arg("d"),
        py::arg("theta") = "1/4", py::arg("budget") = 10000, py::arg("seed") = 0);

    mod.def(
        "typical_projector",
        [](const std::string& p0, int k, double delta, int m_target) {
            const TypicalSpec spec{parse_rational(p0), k, delta, m_target};
            const auto [p, diag] = typical_projector(spec);
            py::dict out;
            out["projector"] = Matrix(p.entries());
            out["raw_rank"] = diag.raw_rank;
            out["raw_mass"] = diag.raw_mass;
            out["captured_mass"] = diag.captured_mass;
            return out;
        },
        py::arg("p0"), py::arg("k"), py::arg("delta"), py::arg("m_target"));

    mod.def(
        "schumacher_demo",
        [](const std::string& p0, int k, double delta, int m_target, long d,
           const std::string& theta, std::uint64_t seed, long budget) {
            const TypicalSpec spec{parse_rational(p0), k, delta, m_target};
            const DemoReport report =
                schumacher_demo(spec, d, parse_rational(theta), seed, budget);
            py::dict out;
            out["nonvacuous"] = report.nonvacuous;
            out["raw_rank"] = report.diagnostics.raw_rank;
            out["captured_mass"] = report.diagnostics.captured_mass;
            out["cover"] = cover_dict(report.cover);
            if (const auto* w = std::get_if<WitnessReport>(&report.outcome)) {
                out["witness"] = witness_dict(*w);
            } else {
                const auto& notice = std::get<ResidualNotice>(report.outcome);
                py::dict res;
                res["residual_mass"] = rat(notice.residual_mass);
                res["e_minus_d"] = notice.e_minus_d;
                out["residual"] = res;
            }
            out["report_json"] = demo_report_to_json(report).dump();
            return out;
        },
        py::arg("p0"), py::arg("k"), py::arg("delta"), py::arg("m_target"),
        py::arg("d"), py::arg("theta") = "1/4", py::arg("seed") = 0,
        py::arg("budget") = 10000);

    mod.def(
        "beta_tail", [](long a, long b, double x) { return beta_tail(a, b, x); },
        py::arg("a"), py::arg("b"), py::arg("x"));

    mod.def(
        "canonical_state_json",
        [](const Vector& psi) {
            return canonical_state_json(PureState(qubits_for_dim(psi.size()), psi));
        },
        py::arg("psi"));
}
