#include "hwm/conserved.hpp"

#include <cmath>
#include <limits>

#include "hwm/field.hpp"

namespace hwm {

double energy_algebraic(const SolitonState& state) {
    cplx acc(0.0);
    const int n = state.size();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const cplx d = state.poles[j] - std::conj(state.poles[k]);
            if (d == cplx(0.0)) throw CoincidentPoles("energy_algebraic: pole on the real axis");
            acc += hermitian_dot(state.spins[j], state.spins[k]) / (d * d);
        }
    return -4.0 * M_PI * acc.real();
}

ConservedSnapshot snapshot(const SolitonState& state) {
    ConservedSnapshot snap;
    const int n = state.size();
    for (int j = 0; j < n; ++j) {
        snap.spin_sum = snap.spin_sum + state.spins[j];
        snap.velocity_sum += state.velocities[j];
        snap.im_sum += state.poles[j].imag();
        snap.max_spin_norm = std::max(snap.max_spin_norm, norm(state.spins[j]));
    }
    snap.energy_algebraic = energy_algebraic(state);
    snap.min_im = std::numeric_limits<double>::infinity();
    snap.min_sep = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        snap.min_im = std::min(snap.min_im, state.poles[j].imag());
        for (int k = j + 1; k < n; ++k)
            snap.min_sep = std::min(snap.min_sep, std::abs(state.poles[j] - state.poles[k]));
    }
    return snap;
}

namespace {

// |grad| m = -H dx m, the positive half-Laplacian, closed form.
Vec3 halflap(const SolitonState& state, double x) {
    return -1.0 * eval_halfwave(state, x);
}

// integral over the real line by x = tan(theta) Simpson; f must decay like
// 1/x^3 or faster so the substituted integrand vanishes at the ends.
template <class F>
double line_integral(F&& f, int nodes) {
    int n = nodes;
    if (n < 5) n = 5;
    if (n % 2 == 0) ++n;
    const double h = M_PI / (n - 1);
    double acc = 0.0;
    for (int k = 1; k + 1 < n; ++k) {
        const double theta = -0.5 * M_PI + k * h;
        const double c = std::cos(theta);
        const double x = std::tan(theta);
        const double weight = (k % 2 == 1) ? 4.0 : 2.0;
        acc += weight * f(x) / (c * c);
    }
    return acc * h / 3.0;
}

}  // namespace

double energy_quadrature(const SolitonState& state, const EnergyQuadratureSpec& spec) {
    if (state.size() == 0) return 0.0;
    auto integrand = [&](double x) {
        return dot(halflap(state, x), eval_m(state, x) - state.m0);
    };
    return line_integral(integrand, spec.nodes);
}

double energy_h12(const SolitonState& state, const EnergyQuadratureSpec& spec) {
    if (state.size() == 0) return 0.0;

    // m'(y), closed form
    auto mx = [&](double y) {
        CVec3 acc;
        for (int j = 0; j < state.size(); ++j) {
            const cplx d = y - state.poles[j];
            acc = acc + (1.0 / (d * d)) * state.spins[j];
        }
        return 2.0 * imag(acc);
    };

    // F(x) = int m'(y)/sqrt(|x-y|) dy = 2 int_0^U [m'(x+u^2) + m'(x-u^2)] du
    const double umax = std::sqrt(spec.h12_cutoff);
    int ni = spec.h12_inner;
    if (ni % 2 == 0) ++ni;
    const double hu = umax / (ni - 1);
    auto F = [&](double x) {
        Vec3 acc{0.0, 0.0, 0.0};
        for (int k = 0; k < ni; ++k) {
            const double u = k * hu;
            const double weight = (k == 0 || k == ni - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            acc = acc + weight * (mx(x + u * u) + mx(x - u * u));
        }
        return (2.0 * hu / 3.0) * acc;
    };

    auto integrand = [&](double x) {
        const Vec3 v = F(x);
        return dot(v, v);
    };
    return line_integral(integrand, spec.h12_outer) / (2.0 * M_PI);
}

EnergySplit energy_split(const SolitonState& state, const std::vector<int>& subset) {
    const int n = state.size();
    std::vector<char> in(n, 0);
    for (int idx : subset) {
        if (idx < 0 || idx >= n) throw InvalidInput("energy_split: index out of range");
        in[idx] = 1;
    }
    cplx a(0.0), b(0.0), c(0.0), d(0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const cplx dd = state.poles[j] - std::conj(state.poles[k]);
            const cplx term = hermitian_dot(state.spins[j], state.spins[k]) / (dd * dd);
            if (in[j] && in[k]) a += term;
            else if (!in[j] && in[k]) b += term;
            else if (in[j] && !in[k]) c += term;
            else d += term;
        }
    const double f = -4.0 * M_PI;
    return {f * a.real(), f * b.real(), f * c.real(), f * d.real()};
}

nlohmann::json to_json(const ConservedSnapshot& snap) {
    nlohmann::json j;
    j["spin_sum"] = nlohmann::json::array();
    for (int i = 0; i < 3; ++i)
        j["spin_sum"].push_back({snap.spin_sum[i].real(), snap.spin_sum[i].imag()});
    j["velocity_sum"] = {snap.velocity_sum.real(), snap.velocity_sum.imag()};
    j["im_sum"] = snap.im_sum;
    j["energy_algebraic"] = snap.energy_algebraic;
    if (std::isfinite(snap.min_im)) j["min_im"] = snap.min_im;
    if (std::isfinite(snap.min_sep)) j["min_sep"] = snap.min_sep;
    j["max_spin_norm"] = snap.max_spin_norm;
    return j;
}

}  // namespace hwm
