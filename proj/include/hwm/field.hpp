#pragma once

// Closed-form evaluation of the field and its half-wave transform.
//
// Conventions (fixed once, locked by the pv_oracle equivalence test):
//   m(x)      = m0 - 2 sum_j Im[ s_j / (x - x_j) ]
//   H f(x)    = (1/pi) PV int f(y)/(y - x) dy
//   H dx m(x) = -2 Re sum_j s_j / (x - x_j)^2        (residue calculus)
// The PDE monitored here is m_t = m x (H dx m); with this orientation the
// spin-pole equations of dynamics.hpp close it exactly. The positive
// half-Laplacian |grad| = -H dx is what the energy functionals use.

#include <vector>

#include "hwm/state.hpp"

namespace hwm {

Vec3 eval_m(const SolitonState& state, double x);

// H dx m in closed form; decays like 1/x^2.
Vec3 eval_halfwave(const SolitonState& state, double x);

struct QuadratureSpec {
    double cutoff = 1e3;    // truncation half-length L
    double window = 1e-3;   // symmetric PV exclusion half-width
    int nodes = 100000;     // Simpson nodes on the log-radial grid
};

// Principal-value quadrature of (1/pi) PV int m'(y)/(y-x) dy: symmetric
// window exclusion with a series correction 2 w m''(x)/pi, log-spaced Simpson
// on [w, L], analytic 1/y^2-decay tail beyond L.
Vec3 pv_oracle(const SolitonState& state, double x, const QuadratureSpec& spec = {});

// m_t = -2 sum_j Im[ sdot_j/(x-x_j) + s_j xdot_j/(x-x_j)^2 ], with sdot_j from
// the spin equations and xdot_j from the state.
Vec3 eval_mt(const SolitonState& state, double x);

// max over xs of | m_t - m x (H dx m) |. Ground-truth validity meter for the
// rational ansatz; vanishes only when the admissibility conditions AND the
// velocity closure hold.
double pde_residual(const SolitonState& state, const std::vector<double>& xs);

std::vector<double> chebyshev_points(double lo, double hi, int n);

struct FieldSample {
    double x = 0.0;
    Vec3 m{};
    Vec3 halfwave{};
    Vec3 mt{};
    Vec3 residual{};
};

FieldSample sample_field(const SolitonState& state, double x);

}  // namespace hwm
