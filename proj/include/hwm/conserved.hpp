#pragma once

// Conserved and monitored quantities. The algebraic energy is
//   J = -4*pi * sum_{j,k} (s_j . conj(s_k)) / (x_j - conj(x_k))^2,
// the sign/constant fixed so that J equals the quadrature value of
// <|grad| m, m - m0> (nonnegative); see energy_quadrature. The canonical
// one-soliton state (s=(1,i,0), x=i) has J = 2*pi.

#include <vector>

#include "hwm/state.hpp"

#include <json.hpp>

namespace hwm {

struct ConservedSnapshot {
    CVec3 spin_sum;
    cplx velocity_sum{0.0, 0.0};
    double im_sum = 0.0;
    double energy_algebraic = 0.0;
    double min_im = 0.0;
    double min_sep = 0.0;
    double max_spin_norm = 0.0;
};

ConservedSnapshot snapshot(const SolitonState& state);

double energy_algebraic(const SolitonState& state);

struct EnergyQuadratureSpec {
    int nodes = 20001;        // Simpson nodes on the tan-substituted line
    int h12_outer = 2001;     // outer grid of the double-integral form
    int h12_inner = 3001;     // inner grid of the double-integral form
    double h12_cutoff = 400.0;
};

// <|grad| m, m - m0> by quadrature, using the closed-form |grad| m.
double energy_quadrature(const SolitonState& state, const EnergyQuadratureSpec& spec = {});

// Slow second oracle: the double-integral form
//   (1/2pi) * int_x | int_y m'(y) / sqrt(|x-y|) dy |^2 dx,
// whose kernel-squared identity reproduces <|grad| m, m>.
double energy_h12(const SolitonState& state, const EnergyQuadratureSpec& spec = {});

struct EnergySplit {
    double in_in = 0.0;    // (j,k) in subset x subset
    double out_in = 0.0;   // complement x subset
    double in_out = 0.0;   // subset x complement
    double out_out = 0.0;  // complement x complement; this is ||m~||^2 >= 0

    double total() const { return in_in + out_in + in_out + out_out; }
};

// Splits J by membership of (j,k); the four parts sum to J and the
// complement-complement part is itself an H^{1/2} energy, hence nonnegative.
EnergySplit energy_split(const SolitonState& state, const std::vector<int>& subset);

nlohmann::json to_json(const ConservedSnapshot& snap);

}  // namespace hwm
