#include "hwm/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hwm {

CauchySystem make_cauchy(std::vector<cplx> z, std::vector<cplx> y) {
    if (z.size() != y.size()) throw InvalidInput("make_cauchy: node lists must match in length");
    const int m = static_cast<int>(z.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i < j && (z[i] == z[j] || y[i] == y[j]))
                throw NodeCollision("make_cauchy: duplicate nodes");
            if (z[i] == y[j]) throw NodeCollision("make_cauchy: z node equals y node");
        }
    return {std::move(z), std::move(y)};
}

CMatrix cauchy_matrix(const CauchySystem& sys) {
    const int m = sys.size();
    CMatrix a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = 1.0 / (sys.z[i] - sys.y[j]);
    return a;
}

double min_node_gap(const CauchySystem& sys) {
    const int m = sys.size();
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i < j) {
                gap = std::min(gap, std::abs(sys.z[i] - sys.z[j]));
                gap = std::min(gap, std::abs(sys.y[i] - sys.y[j]));
            }
            gap = std::min(gap, std::abs(sys.z[i] - sys.y[j]));
        }
    return gap;
}

cplx det_product(const CauchySystem& sys) {
    const int m = sys.size();
    cplx num(1.0), den(1.0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) num *= (sys.z[i] - sys.z[j]) * (sys.y[j] - sys.y[i]);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) den *= (sys.z[i] - sys.y[j]);
    if (den == cplx(0.0)) throw NodeCollision("det_product: z node equals y node");
    return num / den;
}

cplx det_dense(const CauchySystem& sys) { return LU<cplx>(cauchy_matrix(sys)).det(); }

CMatrix inverse_explicit(const CauchySystem& sys) {
    const int m = sys.size();
    CMatrix b(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            cplx num(1.0);
            for (int k = 0; k < m; ++k) num *= (sys.z[j] - sys.y[k]) * (sys.z[k] - sys.y[i]);
            cplx den = sys.z[j] - sys.y[i];
            for (int k = 0; k < m; ++k) {
                if (k != j) den *= (sys.z[j] - sys.z[k]);
                if (k != i) den *= (sys.y[k] - sys.y[i]);
            }
            if (den == cplx(0.0)) throw NodeCollision("inverse_explicit: coincident nodes");
            b(i, j) = num / den;
        }
    return b;
}

CMatrix inverse_dense(const CauchySystem& sys) {
    const int m = sys.size();
    LU<cplx> lu(cauchy_matrix(sys));
    CMatrix inv(m, m);
    for (int j = 0; j < m; ++j) {
        std::vector<cplx> e(m, cplx(0.0));
        e[j] = 1.0;
        const auto col = lu.solve(std::move(e));
        for (int i = 0; i < m; ++i) inv(i, j) = col[i];
    }
    return inv;
}

CMatrix inverse(const CauchySystem& sys) {
    if (min_node_gap(sys) < kDenseFallbackGap) return inverse_dense(sys);
    return inverse_explicit(sys);
}

std::vector<cplx> cauchy_solve(const CauchySystem& sys, const std::vector<cplx>& rhs) {
    const int m = sys.size();
    if (static_cast<int>(rhs.size()) != m) throw InvalidInput("cauchy_solve: rhs size mismatch");
    if (min_node_gap(sys) < kDenseFallbackGap) return LU<cplx>(cauchy_matrix(sys)).solve(rhs);
    const CMatrix b = inverse_explicit(sys);
    std::vector<cplx> out(m, cplx(0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[i] += b(i, j) * rhs[j];
    return out;
}

double max_inverse_entry(const CauchySystem& sys) {
    const CMatrix b = inverse(sys);
    double worst = 0.0;
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) worst = std::max(worst, std::abs(b(i, j)));
    return worst;
}

CauchySystem spin_bound_system(const std::vector<cplx>& poles, NodeStrategy strategy, double eta) {
    const int n = static_cast<int>(poles.size());
    std::vector<cplx> y(2 * n), z(2 * n);
    for (int j = 0; j < n; ++j) {
        y[j] = poles[j];
        y[n + j] = std::conj(poles[j]);
    }
    if (strategy == NodeStrategy::RealAxisOffset) {
        double base = -std::numeric_limits<double>::infinity();
        for (const cplx& p : poles) base = std::max(base, p.real());
        for (int j = 0; j < 2 * n; ++j) z[j] = base + (j + 1);
    } else {
        for (int j = 0; j < n; ++j) {
            z[j] = poles[j] + eta / 3.0;
            z[n + j] = std::conj(poles[j]) + 2.0 * eta / 3.0;
        }
    }
    return make_cauchy(std::move(z), std::move(y));
}

std::vector<CVec3> recover_spins(const std::vector<std::pair<double, Vec3>>& samples,
                                 const std::vector<cplx>& poles, const Vec3& m0,
                                 double conjugacy_tol) {
    const int n = static_cast<int>(poles.size());
    if (static_cast<int>(samples.size()) != 2 * n)
        throw InvalidInput("recover_spins: need exactly 2N samples");

    std::vector<cplx> z(2 * n), y(2 * n);
    for (int i = 0; i < 2 * n; ++i) z[i] = cplx(samples[i].first, 0.0);
    for (int j = 0; j < n; ++j) {
        y[j] = poles[j];
        y[n + j] = std::conj(poles[j]);
    }
    const CauchySystem sys = make_cauchy(std::move(z), std::move(y));

    // m(x_i) - m0 = sum_k [ i s_k/(x_i-x_k) - i conj(s_k)/(x_i-conj x_k) ]:
    // the sample matrix is the Cauchy matrix right-scaled by diag(i,..,-i,..).
    std::vector<CVec3> spins(n);
    double worst_mismatch = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
        std::vector<cplx> rhs(2 * n);
        for (int i = 0; i < 2 * n; ++i) rhs[i] = samples[i].second[comp] - m0[comp];
        const auto u = cauchy_solve(sys, rhs);
        for (int k = 0; k < n; ++k) {
            const cplx sk = cplx(0.0, -1.0) * u[k];            // undo the +i column scale
            const cplx sbark = cplx(0.0, 1.0) * u[n + k];      // undo the -i column scale
            worst_mismatch = std::max(worst_mismatch, std::abs(sk - std::conj(sbark)));
            spins[k][comp] = sk;
        }
    }
    if (worst_mismatch > conjugacy_tol)
        throw ConjugacyViolation("recover_spins: conjugate blocks disagree", worst_mismatch);
    return spins;
}

double bound_witness(const SolitonState& state, double eta) {
    const int n = state.size();
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (std::abs(state.poles[j].real() - state.poles[k].real()) < eta)
                throw SeparationViolation("bound_witness: Re-separation below eta");
    double max_spin = 0.0, min_im = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        max_spin = std::max(max_spin, norm(state.spins[j]));
        min_im = std::min(min_im, state.poles[j].imag());
    }
    if (n == 0) return 0.0;
    return max_spin * min_im;
}

}  // namespace hwm
