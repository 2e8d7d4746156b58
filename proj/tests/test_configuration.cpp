#include <doctest.h>

#include <random>

#include "hwm/constraints.hpp"
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

}  // namespace

TEST_SUITE("configuration") {

TEST_CASE("validate on the empty state") {
    SolitonState s;
    s.m0 = {0, 0, 1};
    const ConstraintReport rep = validate(s);
    CHECK(rep.null_residuals.empty());
    CHECK(rep.orthogonality_residuals.empty());
    CHECK(rep.sphere_residual == 0.0);
    CHECK(rep.admissible(1e-10));
}

TEST_CASE("validate canonical non-admissible example") {
    // s.(i m0 + conj(s)/(2i)) has modulus exactly 1 for s=(1,i,0), x=i, m0=e3
    const SolitonState s = canonical_one_soliton();
    const ConstraintReport rep = validate(s);
    CHECK(rep.null_residuals[0] == doctest::Approx(0.0));
    CHECK(rep.orthogonality_residuals[0] == doctest::Approx(1.0));
    CHECK(!rep.admissible(1e-10));
    CHECK(rep.min_im == doctest::Approx(1.0));
}

TEST_CASE("validate rejects coincident poles") {
    SolitonState s = canonical_one_soliton();
    s.poles.push_back(s.poles[0]);
    s.velocities.push_back(0.0);
    s.spins.push_back(s.spins[0]);
    CHECK_THROWS_AS(validate(s), CoincidentPoles);
}

TEST_CASE("state JSON round trip uses the documented field names") {
    SolitonState s = canonical_one_soliton();
    s.t = 2.5;
    const nlohmann::json j = to_json(s);
    CHECK(j.contains("m0"));
    CHECK(j.contains("poles"));
    CHECK(j.contains("velocities"));
    CHECK(j.contains("spins"));
    CHECK(j.contains("t"));
    CHECK(j["poles"][0][1] == 1.0);
    const SolitonState back = state_from_json(j);
    CHECK(back.t == s.t);
    CHECK(back.poles[0] == s.poles[0]);
    CHECK(norm(back.spins[0] - s.spins[0]) == 0.0);

    CHECK_THROWS_AS(state_from_json(nlohmann::json{{"m0", {0, 0}}}), ConfigError);
}

TEST_CASE("solve_admissible reaches the constraint manifold for N=1") {
    SolitonState tmpl = canonical_one_soliton();
    tmpl.m0 = {1, 0, 0};
    tmpl.spins[0] = 0.4 * CVec3{{{cplx(0, 0), cplx(1, 0), cplx(0, 1)}}};
    const SolitonState out = solve_admissible(tmpl, 1e-10, 120);
    const ConstraintReport rep = validate(out);
    CHECK(rep.max_residual() <= 1e-10);
    CHECK(rep.admissible(1e-10));
    CHECK(out.poles[0] == tmpl.poles[0]);  // poles never move
}

TEST_CASE("solve_admissible is a fixed point on admissible input") {
    const SolitonState adm = random_admissible({cplx(0, 1), cplx(1, 2)}, {0, 0, 1}, 4, {});
    const SolitonState again = solve_admissible(adm, 1e-10, 120);
    for (int j = 0; j < 2; ++j) CHECK(norm(again.spins[j] - adm.spins[j]) <= 1e-8);
}

TEST_CASE("solve_admissible across N and seeds") {
    std::mt19937_64 seeder(123);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cplx> poles;
            std::mt19937_64 rng(seeder());
            std::uniform_real_distribution<double> re(-10.0, 10.0), im(0.4, 2.0);
            for (int j = 0; j < n; ++j) poles.push_back(cplx(re(rng) + 6.0 * j, im(rng)));
            const SolitonState out = random_admissible(poles, {0, 0, 1}, rng(), {});
            const ConstraintReport rep = validate(out);
            CHECK(rep.max_residual() <= 1e-10);
            // nullity is exact through the frame parametrisation
            for (double r : rep.null_residuals) CHECK(r <= 1e-14);
            for (int j = 0; j < n; ++j) CHECK(out.poles[j] == poles[j]);
        }
    }
}

TEST_CASE("closure velocities: isolated soliton moves at a real subluminal speed") {
    SolitonState tmpl = canonical_one_soliton();
    tmpl.spins[0] = make_null_spin({1, 0, 0}, {0, 1, 0}, 0.5).value;
    SolveOptions opts;
    opts.velocity = SolveOptions::Velocity::Closure;
    const SolitonState out = solve_admissible(tmpl, opts);
    CHECK(std::abs(out.velocities[0].imag()) <= 1e-12);
    CHECK(std::abs(out.velocities[0].real()) < 1.0);
    // the closure is what makes the ansatz solve the PDE
    CHECK(pde_residual(out, chebyshev_points(-20, 20, 41)) <= 1e-10);
}

TEST_CASE("two_soliton_preset") {
    SUBCASE("subluminal targets give a PDE-valid state with the requested velocities") {
        const PresetResult r = two_soliton_preset(0.5, -0.5, {1.0, 1.0}, 0);
        CHECK(r.velocity_mode == "targeted");
        CHECK(!r.degenerate);
        CHECK(r.state.velocities[0] == cplx(0.5));
        CHECK(r.state.velocities[1] == cplx(-0.5));
        CHECK(validate(r.state).admissible(1e-10));
        CHECK(r.state.poles[0].imag() == doctest::Approx(1.0));
        CHECK(r.state.poles[1].imag() == doctest::Approx(1.0));
        CHECK(pde_residual(r.state, chebyshev_points(-20, 20, 41)) <= 1e-8);
    }
    SUBCASE("unit speeds fall back to raw velocities") {
        const PresetResult r = two_soliton_preset(1.0, -1.0, {1.0, 1.0}, 0);
        CHECK(r.velocity_mode == "raw");
        CHECK(validate(r.state).admissible(1e-10));
        CHECK(r.state.velocities[0] == cplx(1.0));
    }
    SUBCASE("equal velocities are allowed but flagged degenerate") {
        const PresetResult r = two_soliton_preset(0.0, 0.0, {1.0, 1.0}, 1);
        CHECK(r.degenerate);
        CHECK(validate(r.state).admissible(1e-10));
    }
    SUBCASE("pole on the real axis is rejected") {
        CHECK_THROWS_AS(two_soliton_preset(1.0, -1.0, {0.0, 1.0}, 0), InvalidInput);
    }
}

TEST_CASE("closure velocities extend to four interacting solitons") {
    SolveOptions so;
    so.velocity = SolveOptions::Velocity::Closure;
    std::vector<cplx> poles{cplx(-9, 1.0), cplx(-3, 1.4), cplx(3, 0.7), cplx(9, 1.1)};
    const SolitonState s = random_admissible(poles, {0, 0, 1}, 31, so);
    CHECK(validate(s).max_residual() <= 1e-10);
    CHECK(pde_residual(s, chebyshev_points(-30, 30, 61)) <= 1e-8);
}

TEST_CASE("pde_residual is monotone in the constraint residual") {
    // perturb an admissible state by shrinking epsilons; the residual must track
    SolveOptions opts;
    opts.velocity = SolveOptions::Velocity::Closure;
    const SolitonState base = random_admissible({cplx(-2, 1), cplx(2, 1.3)}, {0, 0, 1}, 9, opts);
    const auto xs = chebyshev_points(-20, 20, 41);
    double last = std::numeric_limits<double>::infinity();
    for (double eps : {1e-3, 1e-6, 1e-9}) {
        SolitonState pert = base;
        for (auto& sp : pert.spins) sp = (1.0 + eps) * sp;
        const double res = pde_residual(pert, xs);
        CHECK(res < last);
        last = res;
    }
    CHECK(pde_residual(base, xs) < last);
}

}  // TEST_SUITE
