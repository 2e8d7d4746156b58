#pragma once

// Complex 3-vector algebra for the spin variables. The spin equations use the
// bilinear (unconjugated) dot product and its cross product; energy formulas
// use the Hermitian pairing. The two products are kept as separately named
// functions and never overloaded onto one symbol.

#include <array>
#include <cmath>
#include <complex>

#include "hwm/errors.hpp"

namespace hwm {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

struct CVec3 {
    std::array<cplx, 3> c{};

    cplx& operator[](int i) { return c[i]; }
    const cplx& operator[](int i) const { return c[i]; }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline CVec3 operator+(const CVec3& a, const CVec3& b) { return {{{a[0] + b[0], a[1] + b[1], a[2] + b[2]}}}; }
inline CVec3 operator-(const CVec3& a, const CVec3& b) { return {{{a[0] - b[0], a[1] - b[1], a[2] - b[2]}}}; }
inline CVec3 operator*(const cplx& s, const CVec3& a) { return {{{s * a[0], s * a[1], s * a[2]}}}; }
inline CVec3 operator*(double s, const CVec3& a) { return {{{s * a[0], s * a[1], s * a[2]}}}; }

inline CVec3 to_complex(const Vec3& a) { return {{{cplx(a[0]), cplx(a[1]), cplx(a[2])}}}; }
inline Vec3 real(const CVec3& a) { return {a[0].real(), a[1].real(), a[2].real()}; }
inline Vec3 imag(const CVec3& a) { return {a[0].imag(), a[1].imag(), a[2].imag()}; }
inline CVec3 conj(const CVec3& a) { return {{{std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}}}; }

/// Bilinear dot: sum a_i b_i, no conjugation. Symmetric in its arguments.
inline cplx bilinear_dot(const CVec3& a, const CVec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Hermitian pairing: sum a_i conj(b_i).
inline cplx hermitian_dot(const CVec3& a, const CVec3& b) {
    return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

/// Hermitian norm |a| = sqrt(sum |a_i|^2).
inline double norm(const CVec3& a) {
    return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
}

/// Bilinear extension of the real cross product. Antisymmetric, cross(a,a)=0.
inline CVec3 cross(const CVec3& a, const CVec3& b) {
    return {{{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}}};
}

inline bool finite(const CVec3& a) {
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(a[i].real()) || !std::isfinite(a[i].imag())) return false;
    return true;
}

/// Default tolerance for constraint residuals (dimensionless).
inline constexpr double kConstraintTol = 1e-10;

/// A null spin satisfies s.s = 0 bilinearly, equivalently |Re s| = |Im s| and
/// Re s ⟂ Im s. Constructed from a real frame so nullity holds to rounding.
struct NullSpin {
    CVec3 value;
};

/// Builds amplitude * (u_hat + i v_hat) where (u_hat, v_hat) is the
/// Gram-Schmidt orthonormalisation of (u, v). Throws DegenerateFrame when u
/// and v do not span a plane.
NullSpin make_null_spin(const Vec3& u, const Vec3& v, double amplitude);

/// |s.s| scaled residual check against kConstraintTol-style tolerances.
inline double null_residual(const CVec3& s) { return std::abs(bilinear_dot(s, s)); }

}  // namespace hwm
