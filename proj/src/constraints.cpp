#include "hwm/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hwm/linalg.hpp"

namespace hwm {

std::vector<cplx> closure_velocities(const SolitonState& state) {
    const int n = state.size();
    std::vector<cplx> v(n);
    for (int j = 0; j < n; ++j) {
        const CVec3& s = state.spins[j];
        const cplx ss = hermitian_dot(s, s);
        if (std::abs(ss) == 0.0) throw InvalidInput("closure_velocities: zero spin");
        const CVec3 f = constraint_vector(state, j);
        v[j] = bilinear_dot(f, cross(s, conj(s))) / ss;
    }
    return v;
}

namespace {

Vec3 rotate(const Vec3& omega, const Vec3& x) {
    const double theta = norm(omega);
    if (theta < 1e-12) return x + cross(omega, x);
    const Vec3 k = (1.0 / theta) * omega;
    const double c = std::cos(theta), s = std::sin(theta);
    return c * x + s * cross(k, x) + ((1.0 - c) * dot(k, x)) * k;
}

struct SpinFrame {
    Vec3 u, v;      // orthonormal
    double log_a;   // spin = exp(log_a) * (u + i v)
};

SpinFrame frame_from_spin(const CVec3& s) {
    Vec3 u = real(s), v = imag(s);
    const double a = norm(s) / std::sqrt(2.0);
    if (a == 0.0) throw InvalidInput("solve_admissible: template spin is zero");
    const NullSpin ns = make_null_spin(u, v, 1.0);
    return {real(ns.value), imag(ns.value), std::log(a)};
}

CVec3 spin_from_frame(const SpinFrame& f, const Vec3& omega, double dlog) {
    const Vec3 u = rotate(omega, f.u);
    const Vec3 v = rotate(omega, f.v);
    const double a = std::exp(f.log_a + dlog);
    CVec3 s;
    for (int i = 0; i < 3; ++i) s[i] = a * cplx(u[i], v[i]);
    return s;
}

struct NewtonProblem {
    SolitonState base;              // poles, m0 (unit), velocities from template
    std::vector<SpinFrame> frames;
    bool target_velocities = false;
    std::vector<cplx> targets;

    int unknowns() const { return 4 * base.size(); }
    int equations() const { return (target_velocities ? 4 : 2) * base.size(); }

    SolitonState make_state(const std::vector<double>& theta) const {
        SolitonState s = base;
        for (int j = 0; j < base.size(); ++j) {
            const Vec3 omega{theta[4 * j], theta[4 * j + 1], theta[4 * j + 2]};
            s.spins[j] = spin_from_frame(frames[j], omega, theta[4 * j + 3]);
        }
        return s;
    }

    std::vector<double> residual(const std::vector<double>& theta) const {
        const SolitonState s = make_state(theta);
        std::vector<double> r;
        r.reserve(equations());
        for (int j = 0; j < s.size(); ++j) {
            const cplx g = bilinear_dot(s.spins[j], constraint_vector(s, j));
            r.push_back(g.real());
            r.push_back(g.imag());
        }
        if (target_velocities) {
            const auto v = closure_velocities(s);
            for (int j = 0; j < s.size(); ++j) {
                const cplx w = v[j] - targets[j];
                r.push_back(w.real());
                r.push_back(w.imag());
            }
        }
        return r;
    }

    // Frames absorb the accepted rotation so the exp-map stays near identity.
    void rebase(const std::vector<double>& theta) {
        for (int j = 0; j < base.size(); ++j) {
            const Vec3 omega{theta[4 * j], theta[4 * j + 1], theta[4 * j + 2]};
            frames[j].u = rotate(omega, frames[j].u);
            frames[j].v = rotate(omega, frames[j].v);
            frames[j].log_a += theta[4 * j + 3];
            // re-orthonormalise against rounding drift
            const NullSpin ns = make_null_spin(frames[j].u, frames[j].v, 1.0);
            frames[j].u = real(ns.value);
            frames[j].v = imag(ns.value);
        }
    }
};

double norm2(const std::vector<double>& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return std::sqrt(s);
}

}  // namespace

SolitonState solve_admissible(const SolitonState& tmpl, double tol, int max_iter) {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return solve_admissible(tmpl, opts);
}

SolitonState solve_admissible(const SolitonState& tmpl, const SolveOptions& opts) {
    SolitonState start = tmpl;
    const double m0n = norm(start.m0);
    if (m0n == 0.0) throw InvalidInput("solve_admissible: m0 is zero");
    start.m0 = (1.0 / m0n) * start.m0;
    if (start.size() == 0) return start;
    for (const cplx& p : start.poles)
        if (p.imag() <= 0.0) throw InvalidInput("solve_admissible: pole not in upper half-plane");

    NewtonProblem prob;
    prob.base = start;
    for (const auto& s : start.spins) prob.frames.push_back(frame_from_spin(s));
    prob.target_velocities = opts.velocity == SolveOptions::Velocity::Target;
    if (prob.target_velocities) {
        if (static_cast<int>(opts.velocity_targets.size()) != start.size())
            throw InvalidInput("solve_admissible: velocity_targets size mismatch");
        prob.targets = opts.velocity_targets;
    }

    const int n_unknowns = prob.unknowns();
    std::vector<double> theta(n_unknowns, 0.0);
    std::vector<double> r = prob.residual(theta);
    double rn = norm2(r);
    double lambda = 1e-6;

    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (max_abs(r) <= opts.tol) break;

        RMatrix jac(static_cast<int>(r.size()), n_unknowns);
        const double h = 1e-6;
        for (int c = 0; c < n_unknowns; ++c) {
            std::vector<double> tp = theta, tm = theta;
            tp[c] += h;
            tm[c] -= h;
            const auto rp = prob.residual(tp);
            const auto rm = prob.residual(tm);
            for (size_t k = 0; k < r.size(); ++k)
                jac(static_cast<int>(k), c) = (rp[k] - rm[k]) / (2.0 * h);
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 16 && !accepted; ++attempt) {
            std::vector<double> step;
            try {
                step = damped_least_squares(jac, r, lambda);
            } catch (const Error&) {
                lambda *= 10.0;
                continue;
            }
            std::vector<double> cand = theta;
            for (int c = 0; c < n_unknowns; ++c) cand[c] += step[c];
            const auto rc = prob.residual(cand);
            const double rcn = norm2(rc);
            if (rcn < rn) {
                prob.rebase(cand);
                theta.assign(n_unknowns, 0.0);
                r = prob.residual(theta);
                rn = norm2(r);
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) break;
    }

    SolitonState out = prob.make_state(theta);
    ConstraintReport rep = validate(out);
    const bool velocity_ok = [&] {
        if (!prob.target_velocities) return true;
        const auto v = closure_velocities(out);
        double worst = 0.0;
        for (int j = 0; j < out.size(); ++j) worst = std::max(worst, std::abs(v[j] - prob.targets[j]));
        return worst <= std::max(opts.tol, 1e-9);
    }();
    if (rep.max_residual() > opts.tol || !velocity_ok)
        throw NoConvergence("solve_admissible: no convergence", rep);

    if (opts.velocity == SolveOptions::Velocity::Closure)
        out.velocities = closure_velocities(out);
    else if (opts.velocity == SolveOptions::Velocity::Target)
        out.velocities = prob.targets;
    return out;
}

namespace {

// Template spin for a requested closure speed v in (-1,1): the isolated
// soliton forces m0.u = sqrt(1-v^2), m0.v = 0, m0.(u x v) = v and
// amplitude = Im(x) * sqrt(1-v^2); psi rotates the residual freedom about m0.
CVec3 informed_spin(const Vec3& m0_unit, const cplx& pole, double v_target, double psi) {
    const double v = std::clamp(v_target, -0.999, 0.999);
    const double a = std::sqrt(1.0 - v * v);
    Vec3 axis{1.0, 0.0, 0.0};
    if (std::abs(m0_unit[0]) > 0.7) axis = {0.0, 1.0, 0.0};
    Vec3 p0 = cross(m0_unit, axis);
    p0 = (1.0 / norm(p0)) * p0;
    const Vec3 q0 = cross(m0_unit, p0);
    const Vec3 p = std::cos(psi) * p0 + std::sin(psi) * q0;
    const Vec3 q = cross(m0_unit, p);
    const Vec3 u = a * m0_unit - v * p;   // u x (-q) = v m0 + a p, so m0.(u x v) = v
    return make_null_spin(u, -1.0 * q, pole.imag() * a).value;
}

}  // namespace

SolitonState random_admissible(const std::vector<cplx>& poles, const Vec3& m0, std::uint64_t seed,
                               const SolveOptions& opts) {
    const int n = static_cast<int>(poles.size());
    const double m0n = norm(m0);
    if (m0n == 0.0) throw InvalidInput("random_admissible: m0 is zero");
    const Vec3 m0u = (1.0 / m0n) * m0;

    const bool informed = [&] {
        if (opts.velocity != SolveOptions::Velocity::Target) return false;
        for (const cplx& v : opts.velocity_targets)
            if (std::abs(v.imag()) > 1e-12 || std::abs(v.real()) >= 1.0) return false;
        return true;
    }();

    std::exception_ptr last;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::mt19937_64 rng(seed + 1000003ULL * static_cast<std::uint64_t>(attempt));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.5, 1.5);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        SolitonState tmpl;
        tmpl.m0 = m0u;
        tmpl.poles = poles;
        tmpl.velocities.assign(n, cplx(0.0));
        for (int j = 0; j < n; ++j) {
            if (informed && attempt < 5) {
                tmpl.spins.push_back(
                    informed_spin(m0u, poles[j], opts.velocity_targets[j].real(), angle(rng)));
            } else {
                Vec3 u{gauss(rng), gauss(rng), gauss(rng)};
                Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
                const double amp = 0.25 * std::min(1.0, poles[j].imag()) * unif(rng);
                tmpl.spins.push_back(make_null_spin(u, v, amp).value);
            }
        }
        try {
            return solve_admissible(tmpl, opts);
        } catch (const NoConvergence&) {
            last = std::current_exception();
        }
    }
    std::rethrow_exception(last);
}

PresetResult two_soliton_preset(double v1, double v2, const std::array<double, 2>& heights,
                                std::uint64_t seed) {
    if (heights[0] <= 0.0 || heights[1] <= 0.0)
        throw InvalidInput("two_soliton_preset: pole on the real axis rejected");

    const double half_gap = 10.0;
    const std::vector<cplx> poles{cplx(-half_gap, heights[0]), cplx(half_gap, heights[1])};
    const Vec3 m0{0.0, 0.0, 1.0};

    PresetResult res;
    res.degenerate = (v1 == v2);

    if (std::abs(v1) < 1.0 && std::abs(v2) < 1.0) {
        SolveOptions opts;
        opts.velocity = SolveOptions::Velocity::Target;
        opts.velocity_targets = {cplx(v1), cplx(v2)};
        try {
            res.state = random_admissible(poles, m0, seed, opts);
            res.velocity_mode = "targeted";
            return res;
        } catch (const NoConvergence&) {
            // fall through to the raw-velocity construction
        }
    }

    SolveOptions opts;  // constraints only; velocities are plain config
    res.state = random_admissible(poles, m0, seed, opts);
    res.state.velocities = {cplx(v1), cplx(v2)};
    res.velocity_mode = "raw";
    return res;
}

}  // namespace hwm
