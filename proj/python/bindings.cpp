// Python bindings for the core operations: state construction/validation,
// the admissibility solver, integration, field evaluation, energies, Cauchy
// algebra and the theorem probes.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hwm/cauchy.hpp"
#include "hwm/conserved.hpp"
#include "hwm/constraints.hpp"
#include "hwm/dynamics.hpp"
#include "hwm/experiments.hpp"
#include "hwm/field.hpp"

namespace py = pybind11;
using namespace hwm;

namespace {

std::vector<cplx> cv3_to_list(const CVec3& v) { return {v[0], v[1], v[2]}; }

CVec3 list_to_cv3(const std::vector<cplx>& v) {
    if (v.size() != 3) throw InvalidInput("spin must have 3 components");
    return {{{v[0], v[1], v[2]}}};
}

Vec3 list_to_vec3(const std::vector<double>& v) {
    if (v.size() != 3) throw InvalidInput("vector must have 3 components");
    return {v[0], v[1], v[2]};
}

std::vector<double> vec3_to_list(const Vec3& v) { return {v[0], v[1], v[2]}; }

py::dict report_to_dict(const ConstraintReport& rep, double tol) {
    py::dict d;
    d["null_residuals"] = rep.null_residuals;
    d["orthogonality_residuals"] = rep.orthogonality_residuals;
    d["sphere_residual"] = rep.sphere_residual;
    d["min_im"] = rep.min_im;
    d["min_separation"] = rep.min_separation;
    d["max_residual"] = rep.max_residual();
    d["admissible"] = rep.admissible(tol);
    return d;
}

py::dict snapshot_to_dict(const ConservedSnapshot& s) {
    py::dict d;
    d["spin_sum"] = cv3_to_list(s.spin_sum);
    d["velocity_sum"] = s.velocity_sum;
    d["im_sum"] = s.im_sum;
    d["energy_algebraic"] = s.energy_algebraic;
    d["min_im"] = s.min_im;
    d["min_sep"] = s.min_sep;
    d["max_spin_norm"] = s.max_spin_norm;
    return d;
}

py::dict report_to_dict(const TheoremReport& rep) {
    py::dict d;
    d["theorem"] = rep.theorem;
    d["horizon"] = rep.horizon;
    d["outside_hypotheses"] = rep.outside_hypotheses;
    py::list verdicts;
    for (const auto& v : rep.verdicts) {
        py::dict vd;
        vd["name"] = v.name;
        vd["pass"] = v.pass;
        vd["value"] = v.value;
        vd["threshold"] = v.threshold;
        verdicts.append(vd);
    }
    d["verdicts"] = verdicts;
    d["conclusion_witnessed"] = rep.conclusion_witnessed;
    d["notes"] = rep.notes;
    if (rep.event) {
        py::dict e;
        e["kind"] = event_kind_name(rep.event->kind);
        e["j"] = rep.event->j;
        e["k"] = rep.event->k;
        e["time"] = rep.event->time;
        e["witness"] = rep.event->witness;
        d["event"] = e;
    }
    return d;
}

SolveOptions make_solve_options(double tol, int max_iter, const std::string& velocity_mode,
                                const std::vector<cplx>& targets) {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    if (velocity_mode == "keep") {
        opts.velocity = SolveOptions::Velocity::Keep;
    } else if (velocity_mode == "closure") {
        opts.velocity = SolveOptions::Velocity::Closure;
    } else if (velocity_mode == "target") {
        opts.velocity = SolveOptions::Velocity::Target;
        opts.velocity_targets = targets;
    } else {
        throw InvalidInput("velocity_mode must be keep|closure|target");
    }
    return opts;
}

IntegratorOptions make_integrator_options(double rel_tol, double abs_tol, double sample_dt,
                                          double nu, double eta_collision, double eta_re,
                                          bool enforce_separation) {
    IntegratorOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = abs_tol;
    o.sample_dt = sample_dt;
    o.nu_blowup = nu;
    o.eta_collision = eta_collision;
    o.eta_re = eta_re;
    o.enforce_separation = enforce_separation;
    return o;
}

}  // namespace

PYBIND11_MODULE(_hwm, m) {
    m.doc() = "rational multi-soliton dynamics for the half-wave maps equation";

    py::register_exception<DegenerateFrame>(m, "DegenerateFrame");
    py::register_exception<CoincidentPoles>(m, "CoincidentPoles");
    py::register_exception<NodeCollision>(m, "NodeCollision");
    py::register_exception<ConjugacyViolation>(m, "ConjugacyViolationError");
    py::register_exception<SeparationViolation>(m, "SeparationViolationError");
    py::register_exception<InvalidInput>(m, "InvalidInputError");

    py::class_<SolitonState>(m, "SolitonState")
        .def(py::init<>())
        .def_property(
            "m0", [](const SolitonState& s) { return vec3_to_list(s.m0); },
            [](SolitonState& s, const std::vector<double>& v) { s.m0 = list_to_vec3(v); })
        .def_readwrite("poles", &SolitonState::poles)
        .def_readwrite("velocities", &SolitonState::velocities)
        .def_property(
            "spins",
            [](const SolitonState& s) {
                std::vector<std::vector<cplx>> out;
                for (const auto& sp : s.spins) out.push_back(cv3_to_list(sp));
                return out;
            },
            [](SolitonState& s, const std::vector<std::vector<cplx>>& v) {
                s.spins.clear();
                for (const auto& sp : v) s.spins.push_back(list_to_cv3(sp));
            })
        .def_readwrite("t", &SolitonState::t)
        .def_property_readonly("size", &SolitonState::size)
        .def("to_json", [](const SolitonState& s) { return to_json(s).dump(); })
        .def_static("from_json",
                    [](const std::string& text) { return state_from_json(nlohmann::json::parse(text)); })
        .def("__repr__", [](const SolitonState& s) {
            return "<SolitonState N=" + std::to_string(s.size()) + " t=" + std::to_string(s.t) + ">";
        });

    m.def(
        "validate",
        [](const SolitonState& s, double tol) { return report_to_dict(validate(s, tol), tol); },
        py::arg("state"), py::arg("tol") = 1e-10);

    m.def(
        "make_null_spin",
        [](const std::vector<double>& u, const std::vector<double>& v, double amplitude) {
            return cv3_to_list(make_null_spin(list_to_vec3(u), list_to_vec3(v), amplitude).value);
        },
        py::arg("u"), py::arg("v"), py::arg("amplitude") = 1.0);

    m.def(
        "solve_admissible",
        [](const SolitonState& tmpl, double tol, int max_iter, const std::string& velocity_mode,
           const std::vector<cplx>& targets) {
            return solve_admissible(tmpl, make_solve_options(tol, max_iter, velocity_mode, targets));
        },
        py::arg("template_state"), py::arg("tol") = 1e-10, py::arg("max_iter") = 120,
        py::arg("velocity_mode") = "keep", py::arg("targets") = std::vector<cplx>{});

    m.def("closure_velocities", &closure_velocities, py::arg("state"));

    m.def(
        "two_soliton_preset",
        [](double v1, double v2, const std::vector<double>& heights, std::uint64_t seed) {
            if (heights.size() != 2) throw InvalidInput("heights must have 2 entries");
            const PresetResult r = two_soliton_preset(v1, v2, {heights[0], heights[1]}, seed);
            py::dict meta;
            meta["degenerate"] = r.degenerate;
            meta["velocity_mode"] = r.velocity_mode;
            return py::make_tuple(r.state, meta);
        },
        py::arg("v1"), py::arg("v2"), py::arg("heights"), py::arg("seed") = 0);

    m.def(
        "random_admissible",
        [](const std::vector<cplx>& poles, const std::vector<double>& m0, std::uint64_t seed,
           const std::string& velocity_mode, const std::vector<cplx>& targets, double tol) {
            return random_admissible(poles, list_to_vec3(m0), seed,
                                     make_solve_options(tol, 120, velocity_mode, targets));
        },
        py::arg("poles"), py::arg("m0") = std::vector<double>{0.0, 0.0, 1.0}, py::arg("seed") = 0,
        py::arg("velocity_mode") = "keep", py::arg("targets") = std::vector<cplx>{},
        py::arg("tol") = 1e-10);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_property_readonly("times",
                               [](const TrajectoryRecord& r) {
                                   std::vector<double> t;
                                   for (const auto& s : r.samples) t.push_back(s.t);
                                   return t;
                               })
        .def_property_readonly(
            "states",
            [](const TrajectoryRecord& r) {
                std::vector<SolitonState> out;
                for (const auto& s : r.samples) out.push_back(s.state);
                return out;
            })
        .def_property_readonly("diagnostics",
                               [](const TrajectoryRecord& r) {
                                   py::list out;
                                   for (const auto& s : r.samples)
                                       out.append(snapshot_to_dict(s.diagnostics));
                                   return out;
                               })
        .def_property_readonly("event",
                               [](const TrajectoryRecord& r) -> py::object {
                                   if (!r.event) return py::none();
                                   py::dict e;
                                   e["kind"] = event_kind_name(r.event->kind);
                                   e["j"] = r.event->j;
                                   e["k"] = r.event->k;
                                   e["time"] = r.event->time;
                                   e["witness"] = r.event->witness;
                                   return e;
                               })
        .def("final_state", &TrajectoryRecord::final_state)
        .def("write_jsonl",
             [](const TrajectoryRecord& r, const std::string& path) { write_jsonl(r, path); });

    m.def(
        "integrate",
        [](const SolitonState& s, double t_end, double rel_tol, double abs_tol, double sample_dt,
           double nu, double eta_collision, double eta_re, bool enforce_separation) {
            return integrate(s, t_end,
                             make_integrator_options(rel_tol, abs_tol, sample_dt, nu, eta_collision,
                                                     eta_re, enforce_separation));
        },
        py::arg("state"), py::arg("t_end"), py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
        py::arg("sample_dt") = 0.1, py::arg("nu") = 1e-6, py::arg("eta_collision") = 1e-8,
        py::arg("eta_re") = 0.0, py::arg("enforce_separation") = false);

    m.def(
        "reverse_check",
        [](const TrajectoryRecord& r, double rel_tol, double abs_tol) {
            IntegratorOptions o;
            o.rel_tol = rel_tol;
            o.abs_tol = abs_tol;
            return reverse_check(r, o);
        },
        py::arg("record"), py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12);

    m.def("read_jsonl", &read_jsonl, py::arg("path"));

    m.def(
        "eval_m", [](const SolitonState& s, double x) { return vec3_to_list(eval_m(s, x)); },
        py::arg("state"), py::arg("x"));
    m.def(
        "eval_halfwave",
        [](const SolitonState& s, double x) { return vec3_to_list(eval_halfwave(s, x)); },
        py::arg("state"), py::arg("x"));
    m.def(
        "eval_mt", [](const SolitonState& s, double x) { return vec3_to_list(eval_mt(s, x)); },
        py::arg("state"), py::arg("x"));
    m.def(
        "pv_oracle",
        [](const SolitonState& s, double x, double cutoff, double window, int nodes) {
            return vec3_to_list(pv_oracle(s, x, {cutoff, window, nodes}));
        },
        py::arg("state"), py::arg("x"), py::arg("cutoff") = 1e3, py::arg("window") = 1e-3,
        py::arg("nodes") = 100000);
    m.def("pde_residual", &pde_residual, py::arg("state"), py::arg("xs"));
    m.def("chebyshev_points", &chebyshev_points, py::arg("lo"), py::arg("hi"), py::arg("n"));

    m.def("snapshot", [](const SolitonState& s) { return snapshot_to_dict(snapshot(s)); },
          py::arg("state"));
    m.def("energy_algebraic", &energy_algebraic, py::arg("state"));
    m.def(
        "energy_quadrature", [](const SolitonState& s) { return energy_quadrature(s); },
        py::arg("state"));
    m.def(
        "energy_h12", [](const SolitonState& s) { return energy_h12(s); }, py::arg("state"));
    m.def(
        "energy_split",
        [](const SolitonState& s, const std::vector<int>& subset) {
            const EnergySplit sp = energy_split(s, subset);
            return py::make_tuple(sp.in_in, sp.out_in, sp.in_out, sp.out_out);
        },
        py::arg("state"), py::arg("subset"));

    m.def(
        "cauchy_det",
        [](const std::vector<cplx>& z, const std::vector<cplx>& y) {
            return det_product(make_cauchy(z, y));
        },
        py::arg("z"), py::arg("y"));
    m.def(
        "cauchy_det_dense",
        [](const std::vector<cplx>& z, const std::vector<cplx>& y) {
            return det_dense(make_cauchy(z, y));
        },
        py::arg("z"), py::arg("y"));
    m.def(
        "cauchy_inverse",
        [](const std::vector<cplx>& z, const std::vector<cplx>& y) {
            const CMatrix b = inverse(make_cauchy(z, y));
            std::vector<std::vector<cplx>> out(b.rows, std::vector<cplx>(b.cols));
            for (int i = 0; i < b.rows; ++i)
                for (int j = 0; j < b.cols; ++j) out[i][j] = b(i, j);
            return out;
        },
        py::arg("z"), py::arg("y"));
    m.def(
        "recover_spins",
        [](const std::vector<std::pair<double, std::vector<double>>>& samples,
           const std::vector<cplx>& poles, const std::vector<double>& m0, double tol) {
            std::vector<std::pair<double, Vec3>> conv;
            for (const auto& [x, mv] : samples) conv.push_back({x, list_to_vec3(mv)});
            const auto spins = recover_spins(conv, poles, list_to_vec3(m0), tol);
            std::vector<std::vector<cplx>> out;
            for (const auto& s : spins) out.push_back(cv3_to_list(s));
            return out;
        },
        py::arg("samples"), py::arg("poles"), py::arg("m0"), py::arg("tol") = 1e-6);
    m.def("bound_witness", &bound_witness, py::arg("state"), py::arg("eta"));

    m.def(
        "run_two_soliton_probe",
        [](const SolitonState& initial, double horizon, double nu, double eta_collision,
           const std::vector<double>& targets, double tol) {
            ExperimentSpec spec;
            spec.name = "two_soliton";
            spec.initial = initial;
            spec.horizon = horizon;
            spec.thresholds.nu = nu;
            spec.thresholds.eta_collision = eta_collision;
            spec.integrator.rel_tol = tol;
            spec.integrator.abs_tol = tol * 1e-2;
            spec.target_velocities = targets;
            return report_to_dict(run_two_soliton_probe(spec));
        },
        py::arg("initial"), py::arg("horizon") = 50.0, py::arg("nu") = 1e-6,
        py::arg("eta_collision") = 1e-8, py::arg("targets") = std::vector<double>{},
        py::arg("tol") = 1e-10);

    m.def(
        "run_separation_probe",
        [](const SolitonState& initial, double horizon, double nu, double eta_collision,
           double eta_re, double tol) {
            ExperimentSpec spec;
            spec.name = "separation";
            spec.initial = initial;
            spec.horizon = horizon;
            spec.thresholds.nu = nu;
            spec.thresholds.eta_collision = eta_collision;
            spec.thresholds.eta_re = eta_re;
            spec.integrator.rel_tol = tol;
            spec.integrator.abs_tol = tol * 1e-2;
            return report_to_dict(run_separation_probe(spec));
        },
        py::arg("initial"), py::arg("horizon") = 20.0, py::arg("nu") = 1e-6,
        py::arg("eta_collision") = 1e-8, py::arg("eta_re") = 0.5, py::arg("tol") = 1e-10);
}
