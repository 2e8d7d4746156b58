#include <doctest.h>

#include <random>

#include "hwm/constraints.hpp"
#include "hwm/dynamics.hpp"
#include "hwm/field.hpp"

using namespace hwm;

namespace {

SolitonState canonical_one_soliton() {
    SolitonState s;
    s.m0 = {0, 0, 1};
    s.poles = {cplx(0, 1)};
    s.velocities = {cplx(0, 0)};
    s.spins = {CVec3{{{cplx(1, 0), cplx(0, 1), cplx(0, 0)}}}};
    return s;
}

// the two equivalent forms of the ansatz must agree and be real
Vec3 eval_m_conjugate_pair(const SolitonState& s, double x) {
    CVec3 acc = to_complex(s.m0);
    const cplx i(0, 1);
    for (int j = 0; j < s.size(); ++j) {
        acc = acc + (i / (x - s.poles[j])) * s.spins[j] -
              (i / (x - std::conj(s.poles[j]))) * conj(s.spins[j]);
    }
    REQUIRE(norm(imag(acc)) <= 1e-12 * (1.0 + norm(real(acc))));
    return real(acc);
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("eval_m closed-form values") {
    SUBCASE("empty state is the background") {
        SolitonState s;
        s.m0 = {0.2, -0.4, 0.6};
        const Vec3 m = eval_m(s, 1.7);
        CHECK(m[0] == 0.2);
        CHECK(m[1] == -0.4);
        CHECK(m[2] == 0.6);
    }
    SUBCASE("hand value at x=0 for the canonical state") {
        const SolitonState s = canonical_one_soliton();
        const Vec3 m = eval_m(s, 0.0);
        CHECK(m[0] == doctest::Approx(-2.0));
        CHECK(m[1] == doctest::Approx(0.0));
        CHECK(m[2] == doctest::Approx(1.0));
    }
    SUBCASE("decay towards the background") {
        const SolitonState s = canonical_one_soliton();
        for (double x : {1e6, -1e6}) {
            const Vec3 d = eval_m(s, x) - s.m0;
            CHECK(norm(d) <= 3.0 * norm(s.spins[0]) / 1e6);
        }
    }
    SUBCASE("conjugate-pair form agrees and is real") {
        const SolitonState s = random_admissible({cplx(-1, 0.8), cplx(2, 1.2)}, {0, 0, 1}, 3, {});
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> xr(-30.0, 30.0);
        for (int i = 0; i < 50; ++i) {
            const double x = xr(rng);
            CHECK(norm(eval_m(s, x) - eval_m_conjugate_pair(s, x)) <= 1e-12);
        }
    }
}

TEST_CASE("admissible states live on the unit sphere") {
    // |m(x)| = 1 pointwise is exactly the two conditions plus |m0|=1
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> xr(-50.0, 50.0);
    for (std::uint64_t seed : {1, 2, 3}) {
        const SolitonState s =
            random_admissible({cplx(-3, 1.0), cplx(0, 0.7), cplx(4, 1.4)}, {0, 0, 1}, seed, {});
        for (int i = 0; i < 100; ++i) {
            const double x = xr(rng);
            CHECK(std::abs(norm(eval_m(s, x)) - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("halfwave operator") {
    SUBCASE("constant field maps to zero") {
        SolitonState s;
        s.m0 = {0, 1, 0};
        const Vec3 h = eval_halfwave(s, 0.3);
        CHECK(norm(h) == 0.0);
    }
    SUBCASE("canonical closed form at x=0") {
        const Vec3 h = eval_halfwave(canonical_one_soliton(), 0.0);
        CHECK(h[0] == doctest::Approx(2.0));
        CHECK(h[1] == doctest::Approx(0.0));
        CHECK(h[2] == doctest::Approx(0.0));
    }
    SUBCASE("additive over soliton pieces") {
        const SolitonState s = random_admissible({cplx(-2, 1.0), cplx(2, 1.3)}, {0, 0, 1}, 5, {});
        SolitonState p1 = s, p2 = s;
        p1.poles = {s.poles[0]};
        p1.spins = {s.spins[0]};
        p1.velocities = {s.velocities[0]};
        p2.poles = {s.poles[1]};
        p2.spins = {s.spins[1]};
        p2.velocities = {s.velocities[1]};
        for (double x : {-3.0, 0.0, 1.5, 10.0}) {
            const Vec3 d = eval_halfwave(s, x) - (eval_halfwave(p1, x) + eval_halfwave(p2, x));
            CHECK(norm(d) <= 1e-14);
        }
    }
}

TEST_CASE("pv quadrature locks the transform convention") {
    const SolitonState s = canonical_one_soliton();
    SUBCASE("empty state") {
        SolitonState empty;
        empty.m0 = {0, 0, 1};
        CHECK(norm(pv_oracle(empty, 0.5)) == 0.0);
    }
    SUBCASE("defaults meet the 1e-6 gate at several points") {
        for (double x : {0.0, 0.7, -2.0, 5.0}) {
            const Vec3 gap = pv_oracle(s, x) - eval_halfwave(s, x);
            CHECK(norm(gap) <= 1e-6);
        }
    }
    SUBCASE("refinement shrinks the error monotonically") {
        double last = std::numeric_limits<double>::infinity();
        for (int level = 0; level < 3; ++level) {
            QuadratureSpec spec;
            spec.nodes = 1000 << level;
            spec.window = 8e-2 / (1 << level);  // grid and window refine together
            spec.cutoff = 50.0;
            const double err = norm(pv_oracle(s, 0.3, spec) - eval_halfwave(s, 0.3));
            CHECK(err < last);
            last = err;
        }
    }
}

TEST_CASE("eval_mt") {
    SUBCASE("single soliton reduces to the velocity term") {
        SolitonState s = canonical_one_soliton();
        s.velocities[0] = cplx(0.4, 0.0);
        // -2 Im[v s/(x-x1)^2] at x=0 with (0-i)^2 = -1: 0.8 Im[s] = (0, 0.8, 0)
        const Vec3 mt = eval_mt(s, 0.0);
        CHECK(mt[0] == doctest::Approx(0.0));
        CHECK(mt[1] == doctest::Approx(0.8));
        CHECK(mt[2] == doctest::Approx(0.0));
    }
    SUBCASE("empty state is static") {
        SolitonState s;
        s.m0 = {1, 0, 0};
        CHECK(norm(eval_mt(s, 2.0)) == 0.0);
    }
    SUBCASE("central-difference oracle along an integrated trajectory") {
        SolveOptions so;
        so.velocity = SolveOptions::Velocity::Closure;
        const SolitonState s = random_admissible({cplx(-2, 1.0), cplx(2, 1.2)}, {0, 0, 1}, 8, so);
        IntegratorOptions io;
        io.rel_tol = 1e-12;
        io.abs_tol = 1e-14;
        io.sample_dt = 1e-5;
        const TrajectoryRecord rec = integrate(s, s.t + 2e-5, io);
        REQUIRE(rec.samples.size() >= 3);
        const SolitonState& sm = rec.samples[0].state;
        const SolitonState& mid = rec.samples[1].state;
        const SolitonState& sp = rec.samples[2].state;
        for (double x : {-1.0, 0.4, 3.0}) {
            const Vec3 fd = (1.0 / 2e-5) * (eval_m(sp, x) - eval_m(sm, x));
            CHECK(norm(eval_mt(mid, x) - fd) <= 1e-7);
        }
    }
}

TEST_CASE("pde_residual") {
    const auto xs = chebyshev_points(-20.0, 20.0, 41);
    SUBCASE("empty state solves trivially") {
        SolitonState s;
        s.m0 = {0, 0, 1};
        CHECK(pde_residual(s, xs) == 0.0);
    }
    SUBCASE("closure-velocity admissible states solve the equation") {
        SolveOptions so;
        so.velocity = SolveOptions::Velocity::Closure;
        const SolitonState s = random_admissible({cplx(0, 1), cplx(1, 2)}, {0, 0, 1}, 2, so);
        CHECK(pde_residual(s, xs) <= 1e-6);
    }
    SUBCASE("a corrupted spin is detected") {
        SolveOptions so;
        so.velocity = SolveOptions::Velocity::Closure;
        SolitonState s = random_admissible({cplx(0, 1), cplx(1, 2)}, {0, 0, 1}, 2, so);
        s.spins[0] = 2.0 * s.spins[0];
        CHECK(pde_residual(s, xs) > 1e-2);
    }
}

}  // TEST_SUITE
