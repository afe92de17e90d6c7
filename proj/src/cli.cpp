#include "relchron/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"

namespace relchron::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

void write_json(const json& j, const fs::path& path) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

Emit parse_emit(const std::string& s) {
    if (s == "populations") return Emit::Populations;
    if (s == "b_function") return Emit::BFunction;
    if (s == "potential_trace") return Emit::PotentialTrace;
    if (s == "diagnostics") return Emit::Diagnostics;
    invalid("unknown emit entry '" + s + "'");
}

json scenario_to_json(const spin::SpinScenarioConfig& c) {
    return json{{"J", c.J},           {"g", c.g},         {"eps", c.eps},
                {"Ecal", c.ecal},     {"a", c.a},         {"branch", std::string(spin::to_string(c.branch))},
                {"n_times", c.n_times}, {"t_max", c.resolved_t_max()}};
}

template <typename T>
T get_key(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        invalid(std::string("config key '") + key + "': " + e.what());
    }
}

double pauli_coefficient(const ComplexMatrix& v, const ComplexMatrix& pauli) {
    return 0.5 * (pauli * v).trace().real();
}

double max_norm_deviation(const RelationalTrajectory& t) {
    double worst = 0.0;
    for (const double n : t.norms) worst = std::max(worst, std::abs(n - 1.0));
    return worst;
}

void write_b_function(const RunConfig& cfg, const std::vector<double>& times) {
    const fs::path path = cfg.output_dir / "b_function.csv";
    auto out = open_output(path);
    out << "a,t,B_re,B_im\n";
    const std::vector<double> widths = cfg.b_widths.empty() ? std::vector<double>{cfg.scenario.a} : cfg.b_widths;
    for (const double a : widths) {
        const auto coeffs = spin::ClockCoefficients::gaussian(cfg.scenario.J, a);
        for (const double t : times) {
            const Complex b = spin::eval_b(coeffs, cfg.scenario.ecal, t);
            out << fmt17(a) << ',' << fmt17(t) << ',' << fmt17(b.real()) << ',' << fmt17(b.imag()) << '\n';
        }
    }
    finish(out, path);
}

void write_potential_trace(const PipelineResult& r, const fs::path& path) {
    auto out = open_output(path);
    out << "t,v0_id,v0_x,v0_y,v0_z,v_id,v_x,v_y,v_z\n";
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix px = spin::pauli_x(), py = spin::pauli_y(), pz = spin::pauli_z();
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        out << fmt17(r.times[k]);
        for (const auto* trace : {&r.trace_zeroth, &r.trace_full}) {
            const ComplexMatrix& v = trace->samples[k];
            for (const auto* p : {&id, &px, &py, &pz}) out << ',' << fmt17(pauli_coefficient(v, *p));
        }
        out << '\n';
    }
    finish(out, path);
}

json diagnostics_json(const RunConfig& cfg, const PipelineResult& r) {
    const GlobalModel& m = r.scenario.model;
    const ComplexMatrix h_tot0 = assemble_h_tot0(m);
    json tipt{{"E0", r.tipt.e0},
              {"E1", r.tipt.e1},
              {"degeneracy", r.tipt.degeneracy},
              {"first_order_residual", first_order_residual(h_tot0, m.coupling, r.tipt)},
              {"psi0_psi1_overlap", std::abs(r.tipt.psi0.dot(r.tipt.psi1))}};
    if (r.tipt.degeneracy > 1) {
        tipt["degenerate_kernel"] = verify_degenerate_kernel(h_tot0, r.tipt.e0, r.tipt.complement_projector());
        tipt["psi2_deg_norm"] = r.tipt.psi2_deg.norm();
    }
    return json{
        {"scenario", scenario_to_json(cfg.scenario)},
        {"tipt", tipt},
        {"exact",
         {{"energy", r.exact.energy},
          {"residual", r.exact.residual},
          {"overlap_with_first_order_state", r.exact.overlap},
          {"energy_minus_first_order", r.exact.energy - (r.tipt.e0 + cfg.scenario.g * r.tipt.e1)}}},
        {"tdpt",
         {{"max_norm_deviation_zeroth", max_norm_deviation(r.tdpt_traj)},
          {"max_norm_deviation_full", max_norm_deviation(r.tdpt_full_traj)}}},
        {"normalization",
         {{"N_min", *std::min_element(r.exact_traj.norms.begin(), r.exact_traj.norms.end())},
          {"N_max", *std::max_element(r.exact_traj.norms.begin(), r.exact_traj.norms.end())}}},
    };
}

json reports_json(const ComparisonReport& tt, const ComparisonReport& et, const ComparisonReport& ei,
                  const ComparisonReport& ff) {
    return json{{"tipt_vs_tdpt", report_to_json(tt)},
                {"exact_vs_tdpt", report_to_json(et)},
                {"exact_vs_tipt", report_to_json(ei)},
                {"tdpt_zeroth_vs_tdpt_full", report_to_json(ff)}};
}

int report_error(const std::exception& e, int code) {
    std::cerr << "relchron: " << e.what() << '\n';
    return code;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const Error& e) {
        return report_error(e, e.code() == ErrorCode::IoError ? kExitIo : kExitInvalid);
    } catch (const fs::filesystem_error& e) {
        return report_error(e, kExitIo);
    } catch (const std::exception& e) {
        return report_error(e, kExitInvalid);
    }
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) invalid("config must be a JSON object");
    static const std::set<std::string> known{"J",       "g",      "eps",        "Ecal",   "a",
                                             "branch",  "n_times", "t_max",     "output_dir",
                                             "g_sweep", "emit",    "b_widths"};
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) invalid("unknown config key '" + item.key() + "'");
    }

    RunConfig cfg;
    auto& s = cfg.scenario;
    s.J = get_key<int>(j, "J");
    s.g = get_key<double>(j, "g");
    s.eps = get_key<double>(j, "eps");
    s.ecal = get_key<double>(j, "Ecal");
    s.branch = spin::parse_branch(get_key<std::string>(j, "branch"));
    if (j.contains("a")) s.a = get_key<double>(j, "a");
    if (j.contains("n_times")) s.n_times = get_key<int>(j, "n_times");
    if (j.contains("t_max")) s.t_max = get_key<double>(j, "t_max");
    if (j.contains("output_dir")) cfg.output_dir = get_key<std::string>(j, "output_dir");
    if (j.contains("g_sweep")) cfg.g_sweep = get_key<std::vector<double>>(j, "g_sweep");
    if (j.contains("b_widths")) cfg.b_widths = get_key<std::vector<double>>(j, "b_widths");
    if (j.contains("emit")) {
        cfg.emit.clear();
        for (const auto& e : get_key<std::vector<std::string>>(j, "emit")) cfg.emit.insert(parse_emit(e));
        if (cfg.emit.empty()) invalid("emit must name at least one output");
    }

    s.validate();
    for (const double g : cfg.g_sweep) {
        if (!(g > 0.0)) invalid("g_sweep values must be positive");
    }
    for (const double a : cfg.b_widths) {
        if (!(a > 0.0)) invalid("b_widths values must be positive");
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        invalid(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg = parse_run_config(j);
    if (const char* env = std::getenv(kTimePointsEnv); env != nullptr && *env != '\0') {
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(env, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != std::string(env).size()) invalid(std::string(kTimePointsEnv) + " must be an integer");
        cfg.scenario.n_times = n;
        cfg.scenario.validate();
    }
    return cfg;
}

void emit_csv(const RelationalTrajectory& traj, const fs::path& path) {
    if (!traj.states.empty() && traj.states.front().size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "population CSV expects a two-level system");
    }
    auto out = open_output(path);
    out << "t,p_up,p_down,norm_N\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << fmt17(traj.times[k]) << ',' << fmt17(traj.population(k, spin::kUp)) << ','
            << fmt17(traj.population(k, spin::kDown)) << ',' << fmt17(traj.norms[k]) << '\n';
    }
    finish(out, path);
}

json report_to_json(const ComparisonReport& r) {
    json j{{"max_pop_deviation", r.max_pop_deviation},
           {"max_pop_deviation_per_level", r.max_pop_deviation_per_level},
           {"mean_fidelity_gap", r.mean_fidelity_gap}};
    // NaN has no JSON encoding; an unset exponent is null.
    j["scaling_exponent"] = std::isnan(r.scaling_exponent) ? json(nullptr) : json(r.scaling_exponent);
    return j;
}

void execute(const RunConfig& cfg) {
    if (cfg.output_dir.empty()) invalid("no output directory (set output_dir or pass --out)");
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + cfg.output_dir.string() + "': " + ec.message());

    const auto times = uniform_grid(static_cast<std::size_t>(cfg.scenario.n_times), cfg.scenario.resolved_t_max());
    if (cfg.emit.contains(Emit::BFunction)) write_b_function(cfg, times);

    const bool needs_pipeline = cfg.emit.contains(Emit::Populations) || cfg.emit.contains(Emit::PotentialTrace) ||
                                cfg.emit.contains(Emit::Diagnostics);
    if (!needs_pipeline) return;

    const PipelineResult r = run_pipeline(cfg.scenario);
    if (cfg.emit.contains(Emit::Populations)) {
        emit_csv(r.exact_traj, cfg.output_dir / "populations_exact.csv");
        emit_csv(r.tipt_traj, cfg.output_dir / "populations_tipt.csv");
        emit_csv(r.tdpt_traj, cfg.output_dir / "populations_tdpt.csv");
        emit_csv(r.tdpt_full_traj, cfg.output_dir / "populations_tdpt_full.csv");
    }
    if (cfg.emit.contains(Emit::PotentialTrace)) write_potential_trace(r, cfg.output_dir / "potential_trace.csv");
    if (cfg.emit.contains(Emit::Diagnostics)) write_json(diagnostics_json(cfg, r), cfg.output_dir / "diagnostics.json");

    json comparison{{"scenario", scenario_to_json(cfg.scenario)},
                    {"reports", reports_json(r.tipt_vs_tdpt, r.exact_vs_tdpt, r.exact_vs_tipt, r.tdpt_vs_tdpt_full)}};
    if (!cfg.g_sweep.empty()) {
        const SweepResult sweep = run_sweep(cfg.scenario, cfg.g_sweep);
        json entries = json::array();
        for (const auto& e : sweep.entries) {
            json entry = reports_json(e.tipt_vs_tdpt, e.exact_vs_tdpt, e.exact_vs_tipt, e.tdpt_vs_tdpt_full);
            entry["g"] = e.g;
            entries.push_back(std::move(entry));
        }
        json exponents = nullptr;
        if (sweep.entries.size() >= 2) {
            exponents = json{{"tipt_vs_tdpt", sweep.exponent_tipt_vs_tdpt},
                             {"exact_vs_tdpt", sweep.exponent_exact_vs_tdpt},
                             {"exact_vs_tipt", sweep.exponent_exact_vs_tipt},
                             {"tdpt_zeroth_vs_tdpt_full", sweep.exponent_tdpt_vs_tdpt_full}};
        }
        comparison["sweep"] = json{{"g", cfg.g_sweep}, {"entries", entries}, {"scaling_exponents", exponents}};
    }
    write_json(comparison, cfg.output_dir / "comparison.json");
}

int run_command(const fs::path& config, const std::optional<fs::path>& out) {
    return guarded([&] {
        RunConfig cfg = load_run_config(config);
        if (out) cfg.output_dir = *out;
        execute(cfg);
    });
}

int sweep_command(const fs::path& config, const std::vector<double>& gs, const std::optional<fs::path>& out) {
    return guarded([&] {
        RunConfig cfg = load_run_config(config);
        if (out) cfg.output_dir = *out;
        if (gs.size() < 2) invalid("a sweep needs at least two g values");
        for (const double g : gs) {
            if (!(g > 0.0)) invalid("g values must be positive");
        }
        cfg.g_sweep = gs;
        execute(cfg);
    });
}

int check_command(const fs::path& config) {
    bool all_passed = true;
    const int rc = guarded([&] {
        const RunConfig cfg = load_run_config(config);
        for (const auto& c : run_invariant_checks(cfg.scenario)) {
            all_passed = all_passed && c.passed;
            std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.value << " (limit "
                      << c.threshold << ")\n";
        }
    });
    if (rc != kExitOk) return rc;
    return all_passed ? kExitOk : kExitInvalid;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"relchron: relational-time dynamics from static and dynamical perturbation theory"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::vector<double> gs;

    auto* run = app.add_subcommand("run", "Run the exact, conditioned first-order and TDPT pipelines");
    run->add_option("--config", config, "JSON run configuration")->required();
    run->add_option("--out", out, "Output directory (overrides output_dir)");

    auto* sweep = app.add_subcommand("sweep", "Run the pipelines over several coupling strengths");
    sweep->add_option("--config", config, "JSON run configuration")->required();
    sweep->add_option("--g", gs, "Comma-separated coupling strengths")->required()->delimiter(',');
    sweep->add_option("--out", out, "Output directory (overrides output_dir)");

    auto* check = app.add_subcommand("check", "Run the invariant suite on a scenario");
    check->add_option("--config", config, "JSON run configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    const std::optional<fs::path> out_dir = out.empty() ? std::nullopt : std::optional<fs::path>(out);
    if (run->parsed()) return run_command(config, out_dir);
    if (sweep->parsed()) return sweep_command(config, gs, out_dir);
    return check_command(config);
}

}  // namespace relchron::cli
