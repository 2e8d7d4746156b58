#include "hwm/state.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace hwm {

double ConstraintReport::max_residual() const {
    double m = sphere_residual;
    for (double r : null_residuals) m = std::max(m, r);
    for (double r : orthogonality_residuals) m = std::max(m, r);
    return m;
}

bool ConstraintReport::admissible(double tol) const {
    return max_residual() <= tol && min_im > 0.0;
}

CVec3 constraint_vector(const SolitonState& state, int j) {
    const int n = state.size();
    CVec3 f = cplx(0.0, 1.0) * to_complex(state.m0);
    for (int k = 0; k < n; ++k) {
        if (k != j) {
            const cplx dx = state.poles[j] - state.poles[k];
            if (dx == cplx(0.0)) throw CoincidentPoles("constraint_vector: coincident poles");
            f = f - (1.0 / dx) * state.spins[k];
        }
        const cplx dxc = state.poles[j] - std::conj(state.poles[k]);
        if (dxc == cplx(0.0))
            throw CoincidentPoles("constraint_vector: pole coincides with a conjugate pole");
        f = f + (1.0 / dxc) * conj(state.spins[k]);
    }
    return f;
}

ConstraintReport validate(const SolitonState& state, double) {
    const int n = state.size();
    ConstraintReport rep;
    rep.sphere_residual = std::abs(norm(state.m0) - 1.0);
    rep.min_im = std::numeric_limits<double>::infinity();
    rep.min_separation = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        rep.min_im = std::min(rep.min_im, state.poles[j].imag());
        for (int k = j + 1; k < n; ++k) {
            const double sep = std::abs(state.poles[j] - state.poles[k]);
            if (sep == 0.0) throw CoincidentPoles("validate: coincident poles");
            rep.min_separation = std::min(rep.min_separation, sep);
        }
    }
    for (int j = 0; j < n; ++j) {
        rep.null_residuals.push_back(null_residual(state.spins[j]));
        rep.orthogonality_residuals.push_back(
            std::abs(bilinear_dot(state.spins[j], constraint_vector(state, j))));
    }
    return rep;
}

namespace {

nlohmann::json cplx_json(const cplx& z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx cplx_from(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected [re,im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json to_json(const SolitonState& state) {
    nlohmann::json j;
    j["m0"] = {state.m0[0], state.m0[1], state.m0[2]};
    j["poles"] = nlohmann::json::array();
    j["velocities"] = nlohmann::json::array();
    j["spins"] = nlohmann::json::array();
    for (const auto& p : state.poles) j["poles"].push_back(cplx_json(p));
    for (const auto& v : state.velocities) j["velocities"].push_back(cplx_json(v));
    for (const auto& s : state.spins)
        j["spins"].push_back(nlohmann::json::array({cplx_json(s[0]), cplx_json(s[1]), cplx_json(s[2])}));
    j["t"] = state.t;
    return j;
}

SolitonState state_from_json(const nlohmann::json& j) {
    SolitonState s;
    try {
        const auto& m0 = j.at("m0");
        if (!m0.is_array() || m0.size() != 3) throw ConfigError("m0 must be [r,r,r]");
        for (int i = 0; i < 3; ++i) s.m0[i] = m0[i].get<double>();
        for (const auto& p : j.at("poles")) s.poles.push_back(cplx_from(p));
        for (const auto& v : j.at("velocities")) s.velocities.push_back(cplx_from(v));
        for (const auto& sp : j.at("spins")) {
            if (!sp.is_array() || sp.size() != 3) throw ConfigError("spin must be [[re,im]x3]");
            CVec3 c;
            for (int i = 0; i < 3; ++i) c[i] = cplx_from(sp[i]);
            s.spins.push_back(c);
        }
        s.t = j.value("t", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad state JSON: ") + e.what());
    }
    if (s.poles.size() != s.velocities.size() || s.poles.size() != s.spins.size())
        throw ConfigError("poles/velocities/spins must have equal length");
    return s;
}

nlohmann::json to_json(const ConstraintReport& rep) {
    nlohmann::json j;
    j["null_residuals"] = rep.null_residuals;
    j["orthogonality_residuals"] = rep.orthogonality_residuals;
    j["sphere_residual"] = rep.sphere_residual;
    if (std::isfinite(rep.min_im)) j["min_im"] = rep.min_im;
    if (std::isfinite(rep.min_separation)) j["min_separation"] = rep.min_separation;
    return j;
}

std::string write_state_file(const SolitonState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << to_json(state).dump(2) << "\n";
    return path;
}

SolitonState read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return state_from_json(j);
}

}  // namespace hwm
