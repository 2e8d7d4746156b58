#include "hwm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace hwm {

PhaseVector pack(const SolitonState& state) {
    const int n = state.size();
    PhaseVector pv;
    pv.data.reserve(10 * n);
    for (int j = 0; j < n; ++j) {
        pv.data.push_back(state.poles[j].real());
        pv.data.push_back(state.poles[j].imag());
    }
    for (int j = 0; j < n; ++j) {
        pv.data.push_back(state.velocities[j].real());
        pv.data.push_back(state.velocities[j].imag());
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 3; ++i) {
            pv.data.push_back(state.spins[j][i].real());
            pv.data.push_back(state.spins[j][i].imag());
        }
    return pv;
}

SolitonState unpack(const PhaseVector& pv, int n, double t, const Vec3& m0) {
    if (static_cast<int>(pv.data.size()) != 10 * n) throw InvalidInput("unpack: wrong length");
    SolitonState s;
    s.m0 = m0;
    s.t = t;
    s.poles.resize(n);
    s.velocities.resize(n);
    s.spins.resize(n);
    int p = 0;
    for (int j = 0; j < n; ++j, p += 2) s.poles[j] = {pv.data[p], pv.data[p + 1]};
    for (int j = 0; j < n; ++j, p += 2) s.velocities[j] = {pv.data[p], pv.data[p + 1]};
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 3; ++i, p += 2) s.spins[j][i] = {pv.data[p], pv.data[p + 1]};
    return s;
}

std::vector<CVec3> spin_rates(const SolitonState& state) {
    const int n = state.size();
    std::vector<CVec3> out(n);
    for (int j = 0; j < n; ++j) {
        CVec3 acc;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const cplx dx = state.poles[j] - state.poles[k];
            if (dx == cplx(0.0)) throw CoincidentPoles("spin_rates: coincident poles");
            acc = acc + (1.0 / (dx * dx)) * cross(state.spins[j], state.spins[k]);
        }
        out[j] = -2.0 * acc;
    }
    return out;
}

std::vector<cplx> pole_accels(const SolitonState& state) {
    const int n = state.size();
    std::vector<cplx> out(n, cplx(0.0));
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const cplx dx = state.poles[j] - state.poles[k];
            if (dx == cplx(0.0)) throw CoincidentPoles("pole_accels: coincident poles");
            out[j] += 4.0 * bilinear_dot(state.spins[j], state.spins[k]) / (dx * dx * dx);
        }
    }
    return out;
}

PhaseVector rhs(const SolitonState& state) {
    const int n = state.size();
    const auto sdot = spin_rates(state);
    const auto xddot = pole_accels(state);
    PhaseVector d;
    d.data.reserve(10 * n);
    for (int j = 0; j < n; ++j) {
        d.data.push_back(state.velocities[j].real());
        d.data.push_back(state.velocities[j].imag());
    }
    for (int j = 0; j < n; ++j) {
        d.data.push_back(xddot[j].real());
        d.data.push_back(xddot[j].imag());
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 3; ++i) {
            d.data.push_back(sdot[j][i].real());
            d.data.push_back(sdot[j][i].imag());
        }
    return d;
}

namespace {

using Y = std::vector<double>;

Y derivative(const Y& y, int n, const Vec3& m0) {
    PhaseVector pv;
    pv.data = y;
    return rhs(unpack(pv, n, 0.0, m0)).data;
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output coefficients (Hairer & Wanner)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseStep {
    double t0 = 0.0, h = 0.0;
    Y r1, r2, r3, r4, r5;

    Y eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        Y out(r1.size());
        for (size_t i = 0; i < r1.size(); ++i)
            out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return out;
    }
};

struct Stepper {
    int n;
    Vec3 m0;
    double rel_tol, abs_tol;
    Y k1;  // FSAL

    Stepper(int n_, const Vec3& m0_, double rt, double at) : n(n_), m0(m0_), rel_tol(rt), abs_tol(at) {}

    // One embedded step from (t,y) with size h. Returns the error ratio and
    // fills y_new / dense. k1 must hold f(y).
    double step(double t, const Y& y, double h, Y& y_new, DenseStep& dense) {
        const size_t m = y.size();
        Y k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), tmp(m);

        for (size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = derivative(tmp, n, m0);
        for (size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = derivative(tmp, n, m0);
        for (size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = derivative(tmp, n, m0);
        for (size_t i = 0; i < m; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = derivative(tmp, n, m0);
        for (size_t i = 0; i < m; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = derivative(tmp, n, m0);
        y_new.resize(m);
        for (size_t i = 0; i < m; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = derivative(y_new, n, m0);

        double err = 0.0;
        for (size_t i = 0; i < m; ++i) {
            const double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / static_cast<double>(m));

        dense.t0 = t;
        dense.h = h;
        dense.r1 = y;
        dense.r2.resize(m);
        dense.r3.resize(m);
        dense.r4.resize(m);
        dense.r5.resize(m);
        for (size_t i = 0; i < m; ++i) {
            const double ydiff = y_new[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            dense.r2[i] = ydiff;
            dense.r3[i] = bspl;
            dense.r4[i] = ydiff - h * k7[i] - bspl;
            dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                               d7 * k7[i]);
        }
        next_k1 = k7;
        return err;
    }

    Y next_k1;
};

struct EventCheck {
    EventKind kind;
    int j, k;
    double value;  // witness (distance to the threshold is value - threshold)
};

// Smallest margin over all event monitors; negative means an event fired.
std::vector<EventCheck> event_values(const SolitonState& s, const IntegratorOptions& o) {
    std::vector<EventCheck> out;
    const int n = s.size();
    if (n >= 1) {
        int jm = 0;
        for (int j = 1; j < n; ++j)
            if (s.poles[j].imag() < s.poles[jm].imag()) jm = j;
        out.push_back({EventKind::BlowUpApproach, jm, -1, s.poles[jm].imag()});
    }
    if (n >= 2) {
        int bj = 0, bk = 1;
        double best = std::abs(s.poles[0] - s.poles[1]);
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const double d = std::abs(s.poles[j] - s.poles[k]);
                if (d < best) best = d, bj = j, bk = k;
            }
        out.push_back({EventKind::PoleCollision, bj, bk, best});
        if (o.enforce_separation) {
            int rj = 0, rk = 1;
            double rbest = std::abs(s.poles[0].real() - s.poles[1].real());
            for (int j = 0; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    const double d = std::abs(s.poles[j].real() - s.poles[k].real());
                    if (d < rbest) rbest = d, rj = j, rk = k;
                }
            out.push_back({EventKind::SeparationViolation, rj, rk, rbest});
        }
    }
    return out;
}

double event_threshold(EventKind k, const IntegratorOptions& o) {
    switch (k) {
        case EventKind::BlowUpApproach: return o.nu_blowup;
        case EventKind::PoleCollision: return o.eta_collision;
        case EventKind::SeparationViolation: return o.eta_re;
    }
    return 0.0;
}

std::optional<EventFlag> fired_event(const SolitonState& s, const IntegratorOptions& o) {
    for (const auto& ev : event_values(s, o)) {
        if (ev.value < event_threshold(ev.kind, o))
            return EventFlag{ev.kind, ev.j, ev.k, s.t, ev.value};
    }
    return std::nullopt;
}

}  // namespace

namespace {

TrajectoryRecord integrate_core(const SolitonState& state0, double t_end, IntegratorOptions opts) {
    if (!(opts.sample_dt > 0.0) || !(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0) ||
        !(opts.h_min > 0.0))
        throw InvalidInput("integrate: sample_dt, tolerances and h_min must be positive");
    const int n = state0.size();
    const double dir = (t_end >= state0.t) ? 1.0 : -1.0;
    TrajectoryRecord rec;
    rec.samples.push_back({state0.t, state0, snapshot(state0)});

    // closed-form flow: no interactions for N <= 1
    if (n <= 1) {
        SolitonState s = state0;
        auto at = [&](double t) {
            SolitonState out = state0;
            out.t = t;
            for (int j = 0; j < n; ++j) out.poles[j] = state0.poles[j] + state0.velocities[j] * (t - state0.t);
            return out;
        };
        double t = state0.t;
        while (dir * (t_end - t) > 1e-15) {
            double tn = t + dir * opts.sample_dt;
            if (dir * (tn - t_end) > 0) tn = t_end;
            SolitonState sn = at(tn);
            // events are linear in t here; bisect between t and tn
            if (auto ev = fired_event(sn, opts)) {
                double lo = 0.0, hi = 1.0;  // fraction of [t, tn]; event holds at hi
                while ((hi - lo) * std::abs(tn - t) > 1e-10) {
                    const double mid = 0.5 * (lo + hi);
                    if (fired_event(at(t + mid * (tn - t)), opts))
                        hi = mid;
                    else
                        lo = mid;
                }
                SolitonState se = at(t + hi * (tn - t));
                auto flag = fired_event(se, opts);
                rec.samples.push_back({se.t, se, snapshot(se)});
                rec.event = flag ? *flag : *ev;
                return rec;
            }
            rec.samples.push_back({sn.t, sn, snapshot(sn)});
            t = tn;
        }
        return rec;
    }

    Stepper stepper(n, state0.m0, opts.rel_tol, opts.abs_tol);
    Y y = pack(state0).data;
    double t = state0.t;
    stepper.k1 = derivative(y, n, state0.m0);

    double h = dir * std::min(opts.sample_dt, 1e-2);
    const double h_cap = (opts.h_max > 0.0) ? opts.h_max : std::numeric_limits<double>::infinity();
    double next_sample = state0.t + dir * opts.sample_dt;
    double err_prev = 1.0;

    auto state_at = [&](const Y& yy, double tt) {
        PhaseVector pv;
        pv.data = yy;
        return unpack(pv, n, tt, state0.m0);
    };

    while (dir * (t_end - t) > 1e-14 * std::max(1.0, std::abs(t))) {
        // land exactly on sample times and the horizon
        double target = next_sample;
        if (dir * (target - t_end) > 0) target = t_end;
        if (dir * (t + h - target) > 0) h = target - t;
        if (std::abs(h) < opts.h_min) {
            throw StepSizeUnderflow("integrate: step size underflow", state_at(y, t), std::abs(h));
        }

        Y y_new;
        DenseStep dense;
        const double err = stepper.step(t, y, h, y_new, dense);
        if (err > 1.0) {
            // reject
            const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            if (std::abs(h) < opts.h_min)
                throw StepSizeUnderflow("integrate: step size underflow", state_at(y, t), std::abs(h));
            continue;
        }

        double t_new = t + h;
        SolitonState s_new = state_at(y_new, t_new);

        if (auto ev = fired_event(s_new, opts)) {
            // bisection on the dense output to 1e-10 in time
            double lo = 0.0, hi = 1.0;  // fraction of the step; event holds at hi
            while ((hi - lo) * std::abs(h) > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double tm = t + mid * h;
                if (fired_event(state_at(dense.eval(tm), tm), opts))
                    hi = mid;
                else
                    lo = mid;
            }
            const double te = t + hi * h;
            SolitonState se = state_at(dense.eval(te), te);
            auto flag = fired_event(se, opts);
            rec.samples.push_back({te, se, snapshot(se)});
            rec.event = flag ? *flag : EventFlag{ev->kind, ev->j, ev->k, te, ev->witness};
            return rec;
        }

        t = t_new;
        y = std::move(y_new);
        stepper.k1 = stepper.next_k1;

        if (std::abs(t - next_sample) <= 1e-12 * std::max(1.0, std::abs(t)) ||
            dir * (t - next_sample) > 0) {
            rec.samples.push_back({t, state_at(y, t), snapshot(state_at(y, t))});
            next_sample += dir * opts.sample_dt;
        } else if (dir * (t_end - t) <= 1e-14 * std::max(1.0, std::abs(t))) {
            rec.samples.push_back({t, state_at(y, t), snapshot(state_at(y, t))});
        }

        // PI controller
        const double fac =
            0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
        err_prev = std::max(err, 1e-10);
        h *= std::clamp(fac, 0.2, 6.0);
        if (std::abs(h) > h_cap) h = dir * h_cap;
    }
    return rec;
}

}  // namespace

TrajectoryRecord integrate(const SolitonState& state, double t_end, const IntegratorOptions& opts) {
    if (!(t_end > state.t)) throw InvalidInput("integrate: t_end must exceed state.t");
    if (opts.validate_initial) {
        const ConstraintReport rep = validate(state);
        if (!rep.admissible(opts.tol_constraint))
            throw InvalidInput("integrate: initial state is not admissible at tol_constraint");
    }
    return integrate_core(state, t_end, opts);
}

double reverse_check(const TrajectoryRecord& record, const IntegratorOptions& opts) {
    if (record.samples.size() < 2) throw InvalidInput("reverse_check: need at least 2 samples");
    if (record.event) throw InvalidInput("reverse_check: record has an event");
    IntegratorOptions o = opts;
    o.validate_initial = false;
    const TrajectoryRecord back =
        integrate_core(record.final_state(), record.samples.front().t, o);
    const Y a = pack(back.final_state()).data;
    const Y b = pack(record.initial()).data;
    double d2 = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(d2);
}

std::string event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::BlowUpApproach: return "blow_up_approach";
        case EventKind::PoleCollision: return "pole_collision";
        case EventKind::SeparationViolation: return "separation_violation";
    }
    return "unknown";
}

nlohmann::json to_json(const EventFlag& flag) {
    nlohmann::json j;
    j["kind"] = event_kind_name(flag.kind);
    j["j"] = flag.j;
    if (flag.k >= 0) j["k"] = flag.k;
    j["time"] = flag.time;
    j["witness"] = flag.witness;
    return j;
}

void write_jsonl(const TrajectoryRecord& record, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    for (const auto& s : record.samples) {
        nlohmann::json line;
        line["t"] = s.t;
        line["state"] = to_json(s.state);
        line["diagnostics"] = to_json(s.diagnostics);
        out << line.dump() << "\n";
    }
    if (record.event) {
        nlohmann::json line;
        line["event"] = to_json(*record.event);
        out << line.dump() << "\n";
    }
}

TrajectoryRecord read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    TrajectoryRecord rec;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        if (j.contains("event")) {
            EventFlag f;
            const auto& e = j["event"];
            const std::string kind = e.at("kind").get<std::string>();
            if (kind == "blow_up_approach") f.kind = EventKind::BlowUpApproach;
            else if (kind == "pole_collision") f.kind = EventKind::PoleCollision;
            else f.kind = EventKind::SeparationViolation;
            f.j = e.value("j", -1);
            f.k = e.value("k", -1);
            f.time = e.at("time").get<double>();
            f.witness = e.at("witness").get<double>();
            rec.event = f;
        } else {
            TrajectorySample s;
            s.t = j.at("t").get<double>();
            s.state = state_from_json(j.at("state"));
            s.diagnostics.im_sum = j.at("diagnostics").value("im_sum", 0.0);
            s.diagnostics.energy_algebraic = j.at("diagnostics").value("energy_algebraic", 0.0);
            s.diagnostics.min_im = j.at("diagnostics").value("min_im", 0.0);
            s.diagnostics.min_sep = j.at("diagnostics").value("min_sep", 0.0);
            s.diagnostics.max_spin_norm = j.at("diagnostics").value("max_spin_norm", 0.0);
            rec.samples.push_back(std::move(s));
        }
    }
    if (rec.samples.empty()) throw ConfigError("empty trajectory file " + path);
    return rec;
}

}  // namespace hwm
