#include "hwm/field.hpp"

#include <cmath>

#include "hwm/dynamics.hpp"

namespace hwm {

Vec3 eval_m(const SolitonState& state, double x) {
    CVec3 acc;
    for (int j = 0; j < state.size(); ++j)
        acc = acc + (1.0 / (x - state.poles[j])) * state.spins[j];
    return state.m0 - 2.0 * imag(acc);
}

Vec3 eval_halfwave(const SolitonState& state, double x) {
    CVec3 acc;
    for (int j = 0; j < state.size(); ++j) {
        const cplx d = x - state.poles[j];
        acc = acc + (1.0 / (d * d)) * state.spins[j];
    }
    return -2.0 * real(acc);
}

namespace {

// m'(y), closed form
Vec3 eval_mx(const SolitonState& state, double y) {
    CVec3 acc;
    for (int j = 0; j < state.size(); ++j) {
        const cplx d = y - state.poles[j];
        acc = acc + (1.0 / (d * d)) * state.spins[j];
    }
    return 2.0 * imag(acc);
}

// m''(y), closed form
Vec3 eval_mxx(const SolitonState& state, double y) {
    CVec3 acc;
    for (int j = 0; j < state.size(); ++j) {
        const cplx d = y - state.poles[j];
        acc = acc + (1.0 / (d * d * d)) * state.spins[j];
    }
    return -4.0 * imag(acc);
}

}  // namespace

Vec3 pv_oracle(const SolitonState& state, double x, const QuadratureSpec& spec) {
    if (state.size() == 0) return {0.0, 0.0, 0.0};
    const double w = spec.window;
    const double L = spec.cutoff;
    int n = spec.nodes;
    if (n < 5) n = 5;
    if (n % 2 == 0) ++n;  // Simpson needs an odd node count

    // PV int m'(y)/(y-x) dy = int_0^inf [m'(x+u) - m'(x-u)]/u du
    auto g = [&](double u) { return (1.0 / u) * (eval_mx(state, x + u) - eval_mx(state, x - u)); };

    // log-radial Simpson over u in [w, L]
    const double tau_max = std::log(L / w);
    const double h = tau_max / (n - 1);
    Vec3 acc{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const double u = w * std::exp(k * h);
        const double weight = (k == 0 || k == n - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc = acc + (weight * u) * g(u);  // du = u dtau
    }
    acc = (h / 3.0) * acc;

    // window correction: g(u) -> 2 m''(x) as u -> 0
    acc = acc + (2.0 * w) * eval_mxx(state, x);

    // tail: m'(y) ~ A/y^2 + B/y^3 gives int_L^inf g = (2B - 4xA)/(3 L^3)
    CVec3 sa, sb;
    for (int j = 0; j < state.size(); ++j) {
        sa = sa + state.spins[j];
        sb = sb + state.poles[j] * state.spins[j];
    }
    const Vec3 A = 2.0 * imag(sa);
    const Vec3 B = 4.0 * imag(sb);
    acc = acc + (1.0 / (3.0 * L * L * L)) * (2.0 * B - (4.0 * x) * A);

    return (1.0 / M_PI) * acc;
}

Vec3 eval_mt(const SolitonState& state, double x) {
    const auto sdot = spin_rates(state);
    CVec3 acc;
    for (int j = 0; j < state.size(); ++j) {
        const cplx d = x - state.poles[j];
        acc = acc + (1.0 / d) * sdot[j] + (state.velocities[j] / (d * d)) * state.spins[j];
    }
    return -2.0 * imag(acc);
}

double pde_residual(const SolitonState& state, const std::vector<double>& xs) {
    double worst = 0.0;
    for (double x : xs) {
        const Vec3 r = eval_mt(state, x) - cross(eval_m(state, x), eval_halfwave(state, x));
        worst = std::max(worst, norm(r));
    }
    return worst;
}

std::vector<double> chebyshev_points(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int k = 0; k < n; ++k) {
        const double c = std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * n));
        xs[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    }
    return xs;
}

FieldSample sample_field(const SolitonState& state, double x) {
    FieldSample s;
    s.x = x;
    s.m = eval_m(state, x);
    s.halfwave = eval_halfwave(state, x);
    s.mt = eval_mt(state, x);
    s.residual = s.mt - cross(s.m, s.halfwave);
    return s;
}

}  // namespace hwm
