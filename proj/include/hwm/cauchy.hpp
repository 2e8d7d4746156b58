#pragma once

// Cauchy matrices A_ij = 1/(z_i - y_j): product-formula determinant, explicit
// inverse, spin recovery from field samples, and the spin-bound witness. The
// explicit formulas are validated against dense LU and replaced by it
// automatically when node gaps fall below kDenseFallbackGap (the products
// overflow first).

#include <utility>
#include <vector>

#include "hwm/linalg.hpp"
#include "hwm/state.hpp"

namespace hwm {

struct CauchySystem {
    std::vector<cplx> z;
    std::vector<cplx> y;

    int size() const { return static_cast<int>(z.size()); }
};

inline constexpr double kDenseFallbackGap = 1e-8;

// Throws NodeCollision unless z_i != y_j for all i,j and both node sets are
// pairwise distinct.
CauchySystem make_cauchy(std::vector<cplx> z, std::vector<cplx> y);

CMatrix cauchy_matrix(const CauchySystem& sys);

double min_node_gap(const CauchySystem& sys);

// prod_{i<j}(z_i-z_j)(y_j-y_i) / prod_{i,j}(z_i-y_j); equals 1/(z-y) at M=1.
cplx det_product(const CauchySystem& sys);
cplx det_dense(const CauchySystem& sys);

// B_ij = prod_k (z_j-y_k)(z_k-y_i) / [ (z_j-y_i) prod_{k!=j}(z_j-z_k) prod_{k!=i}(y_k-y_i) ]
CMatrix inverse_explicit(const CauchySystem& sys);
CMatrix inverse_dense(const CauchySystem& sys);
CMatrix inverse(const CauchySystem& sys);

std::vector<cplx> cauchy_solve(const CauchySystem& sys, const std::vector<cplx>& rhs);

double max_inverse_entry(const CauchySystem& sys);

// Node placement for the boundedness systems; two supported choices.
enum class NodeStrategy { RealAxisOffset, ShiftedPoles };

// The 2N x 2N system whose unknowns are (s_k, conj s_k): y nodes are the
// poles and their conjugates, z nodes per strategy.
CauchySystem spin_bound_system(const std::vector<cplx>& poles, NodeStrategy strategy, double eta);

// Recovers the N spins from 2N real field samples (x_i, m(x_i)) by solving
// the Cauchy system per component; the conjugate-pair consistency of the two
// unknown blocks is checked to conjugacy_tol.
std::vector<CVec3> recover_spins(const std::vector<std::pair<double, Vec3>>& samples,
                                 const std::vector<cplx>& poles, const Vec3& m0,
                                 double conjugacy_tol = 1e-6);

// max_j |s_j| * min_i Im(x_i); bounded along trajectories under the
// separation assumption. Throws SeparationViolation when the minimal
// Re-separation is below eta.
double bound_witness(const SolitonState& state, double eta);

}  // namespace hwm
