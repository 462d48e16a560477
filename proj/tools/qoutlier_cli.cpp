// qoutlier: reproducible experiment runner for the covering/outlier pipeline.
//
// Exit codes: 0 success, 2 contract violation, 3 sampling budget exhausted,
// 4 I/O failure. Diagnostics go to stderr; data goes to stdout and, when
// --output-dir is given, to files inside that directory only.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qoutlier/reports.hpp"
#include "qoutlier/schumacher.hpp"
#include "qoutlier/witness.hpp"

namespace fs = std::filesystem;
using namespace qoutlier;

namespace {

// --config FILE mirrors long flags in a JSON object; explicit command-line
// flags win. Implemented by splicing synthesized flags into argv.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ContractError("--config needs a file");
            config_path = args[i + 1];
            args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
            break;
        }
    }
    if (config_path.empty()) return args;
    const Json config = load_json_file(config_path);
    if (!config.is_object()) throw IoError("config file must be a JSON object");
    for (const auto& [key, value] : config.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        }
        if (present) continue;
        args.push_back(flag);
        args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    return args;
}

void emit(const std::string& text, const std::string& output_dir,
          const std::string& filename) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    if (!output_dir.empty()) {
        fs::create_directories(output_dir);
        write_text_file((fs::path(output_dir) / filename).string(), text);
    }
}

DensityMatrix load_density(const std::string& path) {
    return parse_density(load_json_file(path));
}

// measure atoms name projector files: <id>.json (or <id>) next to the measure
ProjectorMap load_projectors(const ElementaryMeasure& q, const std::string& measure_path) {
    const fs::path dir = fs::path(measure_path).parent_path();
    ProjectorMap out;
    for (const auto& atom : q.support()) {
        fs::path candidate = dir / (atom.id + ".json");
        if (!fs::exists(candidate)) candidate = dir / atom.id;
        if (!fs::exists(candidate)) {
            throw IoError("no projector file for measure atom '" + atom.id + "'");
        }
        out.emplace(atom.id, parse_projector(load_json_file(candidate.string())));
    }
    return out;
}

struct CoverArgs {
    std::string sigma_file, measure_file, output_dir;
    int m = 1;
    long d = 1, budget = 10000;
    std::string theta = "1/4";
    std::uint64_t seed = 0;
};

int run_cover_cmd(const CoverArgs& a) {
    const DensityMatrix sigma = load_density(a.sigma_file);
    const auto [q, table] = measure_from_json(load_json_file(a.measure_file));
    (void)table;
    const ProjectorMap projectors = load_projectors(q, a.measure_file);
    CoverParams params{qubits_for_dim(sigma.dim()), a.m, a.d, parse_rational(a.theta),
                       a.budget};
    params.validate();
    const CoverResult result = run_cover(sigma, q, projectors, params, RngStream(a.seed));

    std::vector<std::string> files, hashes;
    for (std::size_t i = 0; i < result.tests.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "test_%03zu.json", i);
        const std::string body = test_to_canonical_json(result.tests[i]);
        files.emplace_back(name);
        hashes.push_back(content_hash(body));
        if (!a.output_dir.empty()) {
            fs::create_directories(a.output_dir);
            write_text_file((fs::path(a.output_dir) / name).string(), body);
        }
    }
    emit(cover_result_to_json(result, params, a.seed, files, hashes).dump(2),
         a.output_dir, "cover_result.json");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"covering-procedure and outlier-witness toolkit"};
    app.require_subcommand(1);

    // haar-sample
    auto* haar = app.add_subcommand("haar-sample", "emit seeded Haar-random states");
    int hs_qubits = 1;
    long hs_count = 1;
    std::uint64_t hs_seed = 0;
    std::string hs_out;
    haar->add_option("--qubits", hs_qubits, "number of qubits")->required();
    haar->add_option("--count", hs_count, "number of states");
    haar->add_option("--seed", hs_seed, "random seed");
    haar->add_option("--output-dir", hs_out, "directory for state files");

    // verify-moments
    auto* vm = app.add_subcommand("verify-moments", "Monte Carlo check of the moment identities");
    std::string vm_sigma, vm_out, vm_format = "json", vm_projector;
    int vm_m = 1;
    long vm_samples = 100000;
    std::uint64_t vm_seed = 0;
    vm->add_option("--sigma", vm_sigma, "density matrix file")->required();
    vm->add_option("--m", vm_m, "test rank exponent")->required();
    vm->add_option("--samples", vm_samples, "sample count (>= 1000)");
    vm->add_option("--seed", vm_seed, "random seed");
    vm->add_option("--format", vm_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    vm->add_option("--projector", vm_projector, "coverage target projector file");
    vm->add_option("--output-dir", vm_out, "directory for the report");

    // cover
    auto* cover = app.add_subcommand("cover", "run the randomized covering procedure");
    CoverArgs ca;
    cover->add_option("--sigma", ca.sigma_file, "density matrix file")->required();
    cover->add_option("--measure", ca.measure_file, "measure file")->required();
    cover->add_option("--m", ca.m, "projector rank exponent")->required();
    cover->add_option("--d", ca.d, "deficiency target")->required();
    cover->add_option("--theta", ca.theta, "coverage fraction NUM/DEN");
    cover->add_option("--budget", ca.budget, "attempts per round");
    cover->add_option("--seed", ca.seed, "random seed");
    cover->add_option("--output-dir", ca.output_dir, "directory for tests and result");

    // witness
    auto* wit = app.add_subcommand("witness", "certify an outlier for a projector");
    std::string w_projector, w_cover, w_sigma, w_out;
    wit->add_option("--projector", w_projector, "projector file")->required();
    wit->add_option("--cover", w_cover, "cover result file")->required();
    wit->add_option("--sigma", w_sigma, "density matrix file")->required();
    wit->add_option("--output-dir", w_out, "directory for the report");

    // schumacher-demo
    auto* demo = app.add_subcommand("schumacher-demo",
                                    "typical-subspace outlier pipeline");
    std::string d_p0 = "3/4", d_theta = "1/4", d_out;
    int d_copies = 8, d_mtarget = 7;
    long d_d = 3, d_budget = 10000;
    double d_delta = 0.15;
    std::uint64_t d_seed = 0;
    demo->add_option("--p0", d_p0, "larger source eigenvalue NUM/DEN")->required();
    demo->add_option("--copies", d_copies, "number of source copies")->required();
    demo->add_option("--delta", d_delta, "typicality window")->required();
    demo->add_option("--m-target", d_mtarget, "target rank exponent")->required();
    demo->add_option("--d", d_d, "deficiency target")->required();
    demo->add_option("--theta", d_theta, "coverage fraction NUM/DEN");
    demo->add_option("--budget", d_budget, "attempts per round");
    demo->add_option("--seed", d_seed, "random seed");
    demo->add_option("--output-dir", d_out, "directory for the report");

    // deficiency
    auto* defc = app.add_subcommand("deficiency", "family-relative deficiency of a state");
    std::string f_state, f_sigma, f_family, f_out;
    defc->add_option("--state", f_state, "pure state file")->required();
    defc->add_option("--sigma", f_sigma, "density matrix file")->required();
    defc->add_option("--family", f_family, "family file listing member tests")->required();
    defc->add_option("--output-dir", f_out, "directory for the report");

    try {
        const std::vector<std::string> args = expand_config(argc, argv);
        try {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        if (haar->parsed()) {
            const RngStream rng(hs_seed);
            if (hs_count < 1) throw DomainError("--count must be positive");
            for (long i = 0; i < hs_count; ++i) {
                const std::string body =
                    canonical_state_json(haar_sample(hs_qubits, rng.derived(i)));
                char name[32];
                std::snprintf(name, sizeof name, "state_%04ld.json", i);
                emit(body, hs_out, name);
            }
        } else if (vm->parsed()) {
            const DensityMatrix sigma = load_density(vm_sigma);
            CoverParams params{qubits_for_dim(sigma.dim()), vm_m, 1, Rational(1, 4),
                               10000};
            params.validate();
            std::optional<Projector> b;
            if (!vm_projector.empty()) {
                b = parse_projector(load_json_file(vm_projector));
            }
            const MomentReport report =
                verify_moments(sigma, params, vm_samples, RngStream(vm_seed), b);
            if (vm_format == "csv") {
                emit(moment_report_to_csv(report), vm_out, "moments.csv");
            } else {
                emit(moment_report_to_json(report).dump(2), vm_out, "moments.json");
            }
        } else if (cover->parsed()) {
            return run_cover_cmd(ca);
        } else if (wit->parsed()) {
            const DensityMatrix sigma = load_density(w_sigma);
            const Projector p = parse_projector(load_json_file(w_projector));
            const auto [result, params] = cover_from_json(
                load_json_file(w_cover), fs::path(w_cover).parent_path().string(), sigma);
            const CertifyOutcome outcome = certify_outlier(p, result, sigma, params);
            emit(certify_outcome_to_json(outcome).dump(2), w_out, "witness.json");
        } else if (demo->parsed()) {
            const TypicalSpec spec{parse_rational(d_p0), d_copies, d_delta, d_mtarget};
            const DemoReport report = schumacher_demo(spec, d_d, parse_rational(d_theta),
                                                      d_seed, d_budget);
            if (!report.nonvacuous) {
                std::cerr << "warning: 3 m_target - 2k <= 0, the bound is vacuous\n";
            }
            emit(demo_report_to_json(report).dump(2), d_out, "demo_report.json");
        } else if (defc->parsed()) {
            const DensityMatrix sigma = load_density(f_sigma);
            const PureState state = parse_state(load_json_file(f_state));
            const Json fam = load_json_file(f_family);
            if (!fam.contains("members") || !fam["members"].is_array() ||
                fam["members"].empty()) {
                throw IoError("family file needs a non-empty members array");
            }
            const fs::path dir = fs::path(f_family).parent_path();
            std::vector<SigmaTest> members;
            std::vector<long> lengths;
            for (const auto& entry : fam["members"]) {
                const std::string file = entry.at("file").get<std::string>();
                members.push_back(
                    test_from_json(load_json_file((dir / file).string()), sigma));
                lengths.push_back(entry.contains("length")
                                      ? entry["length"].get<long>()
                                      : members.back().code_length());
            }
            const FamilyUniversalTest family(std::move(members), std::move(lengths));
            Json out;
            out["deficiency_q"] = deficiency_q(state, sigma, family);
            out["kraft_sum"] = rational_to_json(family.kraft_sum());
            out["members"] = family.members().size();
            emit(out.dump(2), f_out, "deficiency.json");
        }
        return 0;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const ContractError& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
