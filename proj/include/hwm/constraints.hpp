#pragma once

// Construction of admissible initial data. Spins are parametrised as
// amplitude * rotation of an orthonormal null frame, so s.s = 0 holds exactly
// through the Newton iteration; only the orthogonality conditions (and
// optionally pole-velocity targets) are solved for.

#include <cstdint>
#include <vector>

#include "hwm/state.hpp"

namespace hwm {

struct NoConvergence : Error {
    ConstraintReport best_report;
    NoConvergence(const std::string& what, ConstraintReport best)
        : Error(what), best_report(std::move(best)) {}
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 120;
    // Keep: leave template velocities untouched (velocities are user config).
    // Closure: overwrite velocities with the values the rational ansatz
    //          forces (see closure_velocities).
    // Target: additionally solve for spins such that the closure velocities
    //         hit velocity_targets; the state then solves the PDE with the
    //         requested pole velocities.
    enum class Velocity { Keep, Closure, Target } velocity = Velocity::Keep;
    std::vector<cplx> velocity_targets;
};

// The PDE forces the pole velocity once poles/spins/m0 are fixed: matching
// the double pole of m_t = m x (H dx m) at x_j gives
//   xdot_j = F_j . (s_j x conj(s_j)) / (s_j . conj(s_j)),
// with F_j the constraint vector. Requires s_j.s_j = 0 and s_j.F_j = 0.
std::vector<cplx> closure_velocities(const SolitonState& state);

SolitonState solve_admissible(const SolitonState& tmpl, double tol = 1e-10, int max_iter = 120);
SolitonState solve_admissible(const SolitonState& tmpl, const SolveOptions& opts);

struct PresetResult {
    SolitonState state;
    bool degenerate = false;          // v1 == v2
    std::string velocity_mode;       // "targeted" (closure solved) or "raw"
};

// Admissible two-soliton state with xdot_1 = v1, xdot_2 = v2 and pole heights
// as given. When |v1|,|v2| < 1 the solver also targets the velocity closure,
// so the state solves the PDE exactly; otherwise the velocities are set
// verbatim and only the admissibility conditions hold.
PresetResult two_soliton_preset(double v1, double v2, const std::array<double, 2>& heights,
                                std::uint64_t seed);

// Admissible state on the given poles with seeded random spin frames;
// velocity handling per opts. Used by tests and the N>=3 experiment presets.
SolitonState random_admissible(const std::vector<cplx>& poles, const Vec3& m0,
                               std::uint64_t seed, const SolveOptions& opts = {});

}  // namespace hwm
