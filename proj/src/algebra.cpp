#include "hwm/algebra.hpp"

namespace hwm {

NullSpin make_null_spin(const Vec3& u, const Vec3& v, double amplitude) {
    const double nu = norm(u);
    if (nu == 0.0) throw DegenerateFrame("make_null_spin: u is zero");
    const Vec3 uh = (1.0 / nu) * u;
    Vec3 w = v - dot(v, uh) * uh;
    const double nw = norm(w);
    if (nw <= 1e-12 * (norm(v) + 1.0))
        throw DegenerateFrame("make_null_spin: u and v are parallel");
    const Vec3 vh = (1.0 / nw) * w;
    CVec3 s;
    for (int i = 0; i < 3; ++i) s[i] = amplitude * cplx(uh[i], vh[i]);
    return {s};
}

}  // namespace hwm
