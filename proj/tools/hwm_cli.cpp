// Command-line front end: validation, integration, theorem probes, sweeps,
// field scans and energy checks over JSON/JSONL/CSV files.
//
// Exit codes: 0 success, 2 constraint-validation failure, 3 integrator
// event or step-size underflow, 4 config error. Every failure also emits a
// single JSON diagnostic line on stderr.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hwm/cauchy.hpp"
#include "hwm/conserved.hpp"
#include "hwm/constraints.hpp"
#include "hwm/dynamics.hpp"
#include "hwm/experiments.hpp"
#include "hwm/field.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hwm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConstraint = 2;
constexpr int kExitIntegrator = 3;
constexpr int kExitConfig = 4;

void diagnostic(const std::string& kind, const std::string& message) {
    json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
}

void check_tol(double tol, const std::string& name) {
    if (!(tol >= 1e-14 && tol <= 1e-2))
        throw ConfigError(name + " must lie in [1e-14, 1e-2]");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

// every subcommand keeps a copy of its input next to its outputs
void stash_input(const std::string& input_path, const std::string& out_dir) {
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
    fs::copy_file(input_path, fs::path(out_dir) / "input.json",
                  fs::copy_options::overwrite_existing);
}

SolitonState state_from_spec(const json& spec, std::uint64_t seed_override, bool has_seed) {
    if (spec.contains("preset")) {
        const auto& p = spec["preset"];
        const std::uint64_t seed =
            has_seed ? seed_override : p.value("seed", static_cast<std::uint64_t>(0));
        const auto heights = p.value("heights", std::vector<double>{1.0, 1.0});
        if (heights.size() != 2) throw ConfigError("preset.heights must have 2 entries");
        return two_soliton_preset(p.value("v1", 1.0), p.value("v2", -1.0),
                                  {heights[0], heights[1]}, seed)
            .state;
    }
    if (spec.contains("initial")) return state_from_json(spec["initial"]);
    if (spec.contains("initial_file")) return read_state_file(spec["initial_file"]);
    throw ConfigError("spec needs one of: preset, initial, initial_file");
}

int cmd_validate(const std::string& path, double tol, const std::string& out_dir) {
    check_tol(tol, "--tol");
    const SolitonState state = read_state_file(path);
    const ConstraintReport rep = validate(state, tol);
    json out = to_json(rep);
    out["admissible"] = rep.admissible(tol);
    stash_input(path, out_dir);
    if (!out_dir.empty()) {
        std::ofstream f(fs::path(out_dir) / "report.json");
        f << out.dump(2) << "\n";
    }
    std::cout << out.dump(2) << "\n";
    if (!rep.admissible(tol)) {
        diagnostic("constraint_validation", "state is not admissible at tol");
        return kExitConstraint;
    }
    return kExitOk;
}

int cmd_integrate(const std::string& path, double t_end, const IntegratorOptions& opts,
                  std::string out_file, const std::string& out_dir) {
    const SolitonState state = read_state_file(path);
    const ConstraintReport rep = validate(state);
    if (!rep.admissible(opts.tol_constraint)) {
        diagnostic("constraint_validation", "initial state is not admissible");
        return kExitConstraint;
    }
    stash_input(path, out_dir);
    if (out_file.empty())
        out_file = out_dir.empty() ? "trajectory.jsonl"
                                   : (fs::path(out_dir) / "trajectory.jsonl").string();

    TrajectoryRecord rec;
    try {
        rec = integrate(state, t_end, opts);
    } catch (const StepSizeUnderflow& e) {
        diagnostic("step_size_underflow",
                   std::string(e.what()) + " at t=" + std::to_string(e.state.t));
        return kExitIntegrator;
    }
    write_jsonl(rec, out_file);
    json summary;
    summary["samples"] = rec.samples.size();
    summary["t_final"] = rec.samples.back().t;
    summary["output"] = out_file;
    if (rec.event) summary["event"] = to_json(*rec.event);
    std::cout << summary.dump(2) << "\n";
    if (rec.event) {
        diagnostic("integrator_event", event_kind_name(rec.event->kind));
        return kExitIntegrator;
    }
    return kExitOk;
}

int cmd_probe(const std::string& which, const std::string& path, const std::string& out_dir,
              std::uint64_t seed, bool has_seed) {
    const json spec_json = read_json_file(path);
    stash_input(path, out_dir);

    ExperimentSpec spec;
    spec.name = spec_json.value("name", which);
    spec.initial = state_from_spec(spec_json, seed, has_seed);
    spec.horizon = spec_json.value("horizon", which == "two-soliton" ? 50.0 : 20.0);
    spec.sample_dt = spec_json.value("sample_dt", 0.05);
    if (spec_json.contains("thresholds")) {
        const auto& t = spec_json["thresholds"];
        spec.thresholds.nu = t.value("nu", spec.thresholds.nu);
        spec.thresholds.eta_collision = t.value("eta_collision", spec.thresholds.eta_collision);
        spec.thresholds.eta_re = t.value("eta_re", spec.thresholds.eta_re);
    }
    const double tol = spec_json.value("tol", 1e-10);
    check_tol(tol, "tol");
    spec.integrator.rel_tol = tol;
    spec.integrator.abs_tol = tol * 1e-2;
    if (spec_json.contains("targets"))
        spec.target_velocities = spec_json["targets"].get<std::vector<double>>();
    spec.out_dir = out_dir;

    TheoremReport rep;
    try {
        rep = (which == "two-soliton") ? run_two_soliton_probe(spec) : run_separation_probe(spec);
    } catch (const StepSizeUnderflow& e) {
        diagnostic("step_size_underflow",
                   std::string(e.what()) + " at t=" + std::to_string(e.state.t));
        return kExitIntegrator;
    }
    const json out = to_json(rep);
    if (!out_dir.empty()) {
        std::ofstream f(fs::path(out_dir) / "report.json");
        f << out.dump(2) << "\n";
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& out_dir, std::uint64_t seed,
              bool has_seed) {
    const json grid_json = read_json_file(path);
    stash_input(path, out_dir);
    SweepGrid grid;
    grid.v1 = grid_json.value("v1", std::vector<double>{1.0});
    grid.v2 = grid_json.value("v2", std::vector<double>{});
    grid.heights = grid_json.value("heights", std::vector<double>{});
    grid.horizon = grid_json.value("horizon", 10.0);
    grid.sample_dt = grid_json.value("sample_dt", 0.1);
    grid.seed = has_seed ? seed : grid_json.value("seed", static_cast<std::uint64_t>(0));
    const double tol = grid_json.value("tol", 1e-10);
    check_tol(tol, "tol");
    grid.integrator.rel_tol = tol;
    grid.integrator.abs_tol = tol * 1e-2;

    const auto cells = sweep(grid);
    const std::string csv =
        out_dir.empty() ? "sweep.csv" : (fs::path(out_dir) / "sweep.csv").string();
    write_sweep_csv(cells, csv);
    json summary;
    summary["cells"] = cells.size();
    size_t failures = 0;
    for (const auto& c : cells)
        if (!c.ok) ++failures;
    summary["failed_cells"] = failures;
    summary["output"] = csv;
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_field_scan(const std::string& path, double xmin, double xmax, int n, std::string out_file,
                   const std::string& out_dir) {
    if (!(xmax > xmin) || n < 2) throw ConfigError("need xmax > xmin and n >= 2");
    const SolitonState state = read_state_file(path);
    stash_input(path, out_dir);
    if (out_file.empty())
        out_file = out_dir.empty() ? "field.csv" : (fs::path(out_dir) / "field.csv").string();
    std::ofstream out(out_file);
    if (!out) throw ConfigError("cannot write " + out_file);
    out << "x,m1,m2,m3,residual_norm\n";
    out.precision(17);
    for (int i = 0; i < n; ++i) {
        const double x = xmin + (xmax - xmin) * i / (n - 1);
        const FieldSample s = sample_field(state, x);
        out << x << ',' << s.m[0] << ',' << s.m[1] << ',' << s.m[2] << ',' << norm(s.residual)
            << '\n';
    }
    json summary;
    summary["points"] = n;
    summary["output"] = out_file;
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_energy_check(const std::string& path, bool with_h12, const std::string& out_dir) {
    const SolitonState state = read_state_file(path);
    stash_input(path, out_dir);
    const double j_alg = energy_algebraic(state);
    const double j_quad = energy_quadrature(state);
    json out;
    out["energy_algebraic"] = j_alg;
    out["energy_quadrature"] = j_quad;
    out["rel_gap"] = std::abs(j_alg - j_quad) / std::max(1.0, std::abs(j_alg));
    if (with_h12) {
        const double j_h12 = energy_h12(state);
        out["energy_h12"] = j_h12;
        out["rel_gap_h12"] = std::abs(j_h12 - j_quad) / std::max(1.0, std::abs(j_quad));
    }
    if (!out_dir.empty()) {
        std::ofstream f(fs::path(out_dir) / "energies.json");
        f << out.dump(2) << "\n";
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rational multi-soliton simulator for the half-wave maps equation"};
    app.require_subcommand(1);

    std::string input, out_dir, out_file;
    std::uint64_t seed = 0;
    bool has_seed = false;
    double tol = 1e-10, abs_tol = 1e-12, t_end = 10.0, sample_dt = 0.1;
    double nu = 1e-6, eta_collision = 1e-8, eta_re = 0.0;
    double xmin = -20.0, xmax = 20.0;
    int npoints = 401;
    bool with_h12 = false, enforce_separation = false;

    auto* v = app.add_subcommand("validate", "check the admissibility conditions");
    v->add_option("state", input)->required();
    v->add_option("--tol", tol);
    v->add_option("--out-dir", out_dir);

    auto* it = app.add_subcommand("integrate", "integrate the spin-pole flow");
    it->add_option("state", input)->required();
    it->add_option("--t-end", t_end)->required();
    it->add_option("--tol", tol);
    it->add_option("--abs-tol", abs_tol);
    it->add_option("--sample-dt", sample_dt);
    it->add_option("--nu", nu);
    it->add_option("--eta-collision", eta_collision);
    it->add_option("--eta-re", eta_re);
    it->add_flag("--enforce-separation", enforce_separation);
    it->add_option("--out", out_file);
    it->add_option("--out-dir", out_dir);

    auto* pr = app.add_subcommand("probe", "run a theorem probe");
    std::string which;
    pr->add_option("kind", which)->required()->check(CLI::IsMember({"two-soliton", "separation"}));
    pr->add_option("spec", input)->required();
    pr->add_option("--out-dir", out_dir);
    pr->add_option("--seed", seed)->each([&has_seed](const std::string&) { has_seed = true; });

    auto* sw = app.add_subcommand("sweep", "run a parameter grid");
    sw->add_option("grid", input)->required();
    sw->add_option("--out-dir", out_dir);
    sw->add_option("--seed", seed)->each([&has_seed](const std::string&) { has_seed = true; });

    auto* fsn = app.add_subcommand("field-scan", "evaluate m and the PDE residual on a grid");
    fsn->add_option("state", input)->required();
    fsn->add_option("--xmin", xmin);
    fsn->add_option("--xmax", xmax);
    fsn->add_option("--n", npoints);
    fsn->add_option("--out", out_file);
    fsn->add_option("--out-dir", out_dir);

    auto* ec = app.add_subcommand("energy-check", "compare algebraic and quadrature energies");
    ec->add_option("state", input)->required();
    ec->add_flag("--h12", with_h12, "also run the slow double-integral oracle");
    ec->add_option("--out-dir", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (v->parsed()) return cmd_validate(input, tol, out_dir);
        if (it->parsed()) {
            check_tol(tol, "--tol");
            check_tol(abs_tol, "--abs-tol");
            IntegratorOptions opts;
            opts.rel_tol = tol;
            opts.abs_tol = abs_tol;
            opts.sample_dt = sample_dt;
            opts.nu_blowup = nu;
            opts.eta_collision = eta_collision;
            opts.eta_re = eta_re;
            opts.enforce_separation = enforce_separation;
            return cmd_integrate(input, t_end, opts, out_file, out_dir);
        }
        if (pr->parsed()) return cmd_probe(which, input, out_dir, seed, has_seed);
        if (sw->parsed()) return cmd_sweep(input, out_dir, seed, has_seed);
        if (fsn->parsed()) return cmd_field_scan(input, xmin, xmax, npoints, out_file, out_dir);
        if (ec->parsed()) return cmd_energy_check(input, with_h12, out_dir);
    } catch (const ConfigError& e) {
        diagnostic("config", e.what());
        return kExitConfig;
    } catch (const NoConvergence& e) {
        diagnostic("no_convergence", e.what());
        return kExitConstraint;
    } catch (const StepSizeUnderflow& e) {
        diagnostic("step_size_underflow", e.what());
        return kExitIntegrator;
    } catch (const InvalidInput& e) {
        diagnostic("invalid_input", e.what());
        return kExitConfig;
    } catch (const Error& e) {
        diagnostic("error", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        diagnostic("unexpected", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
