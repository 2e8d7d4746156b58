#pragma once

// Soliton configuration: background value, poles in the upper half-plane,
// pole velocities and spins, plus the admissibility report. JSON layout is
// the on-disk config/checkpoint format and is fixed:
//   {"m0":[r,r,r], "poles":[[re,im],...], "velocities":[[re,im],...],
//    "spins":[[[re,im],[re,im],[re,im]],...], "t":r}

#include <string>
#include <vector>

#include "hwm/algebra.hpp"

#include <json.hpp>

namespace hwm {

struct SolitonState {
    Vec3 m0{0.0, 0.0, 1.0};
    std::vector<cplx> poles;
    std::vector<cplx> velocities;
    std::vector<CVec3> spins;
    double t = 0.0;

    int size() const { return static_cast<int>(poles.size()); }
};

struct ConstraintReport {
    std::vector<double> null_residuals;           // |s_j.s_j|
    std::vector<double> orthogonality_residuals;  // |s_j.F_j|, see constraint_vector
    double sphere_residual = 0.0;                 // ||m0| - 1|
    double min_im = 0.0;                          // min_j Im x_j (+inf when N=0)
    double min_separation = 0.0;                  // min_{j!=k} |x_j - x_k| (+inf when N<2)

    double max_residual() const;
    bool admissible(double tol) const;
};

// F_j = i m0 - sum_{k!=j} s_k/(x_j-x_k) + sum_k conj(s_k)/(x_j-conj(x_k)).
// The two admissibility conditions are s_j.s_j = 0 and s_j.F_j = 0; together
// with |m0|=1 they are exactly the pointwise sphere constraint |m(x)| = 1.
CVec3 constraint_vector(const SolitonState& state, int j);

ConstraintReport validate(const SolitonState& state, double tol = kConstraintTol);

nlohmann::json to_json(const SolitonState& state);
SolitonState state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConstraintReport& report);

std::string write_state_file(const SolitonState& state, const std::string& path);
SolitonState read_state_file(const std::string& path);

}  // namespace hwm
