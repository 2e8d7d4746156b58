#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hwm/constraints.hpp"
#include "hwm/experiments.hpp"

using namespace hwm;

TEST_SUITE("experiments") {

TEST_CASE("two-soliton probe on the standard preset") {
    const PresetResult p = two_soliton_preset(1.0, -1.0, {1.0, 1.0}, 0);
    ExperimentSpec spec;
    spec.name = "probe";
    spec.initial = p.state;
    spec.horizon = 50.0;
    spec.target_velocities = {1.0, -1.0};
    const TheoremReport rep = run_two_soliton_probe(spec);
    CHECK(!rep.outside_hypotheses);
    CHECK(rep.conclusion_witnessed);
    REQUIRE(rep.find("slope_fit") != nullptr);
    CHECK(rep.find("slope_fit")->value <= 1e-3);
    REQUIRE(rep.find("min_im_above_nu") != nullptr);
    CHECK(rep.find("min_im_above_nu")->value >= 0.1);
    REQUIRE(rep.find("spin_norm_no_growth") != nullptr);
    CHECK(rep.find("spin_norm_no_growth")->value <= 1e-3);
}

TEST_CASE("degenerate velocities sit outside the hypotheses") {
    const PresetResult p = two_soliton_preset(0.0, 0.0, {1.0, 1.0}, 1);
    ExperimentSpec spec;
    spec.initial = p.state;
    spec.horizon = 5.0;
    const TheoremReport rep = run_two_soliton_probe(spec);
    CHECK(rep.outside_hypotheses);
    CHECK(rep.verdicts.empty());
    CHECK(!rep.conclusion_witnessed);
}

TEST_CASE("tiny initial height runs as an exploratory probe") {
    // no verdict asserted; the report must simply record how low Im x went
    const PresetResult p = two_soliton_preset(1.0, -1.0, {1e-3, 1.0}, 2);
    ExperimentSpec spec;
    spec.initial = p.state;
    spec.horizon = 5.0;
    const TheoremReport rep = run_two_soliton_probe(spec);
    REQUIRE(rep.find("min_im_above_nu") != nullptr);
    CHECK(std::isfinite(rep.find("min_im_above_nu")->value));
    CHECK(rep.find("min_im_above_nu")->value <= 2e-3);
}

TEST_CASE("reports are deterministic given spec and seed") {
    auto run = [] {
        const PresetResult p = two_soliton_preset(0.6, -0.7, {1.0, 1.2}, 5);
        ExperimentSpec spec;
        spec.initial = p.state;
        spec.horizon = 10.0;
        return to_json(run_two_soliton_probe(spec)).dump();
    };
    CHECK(run() == run());
}

TEST_CASE("separation probe") {
    SUBCASE("well-separated spreading configuration passes") {
        SolveOptions so;
        so.velocity = SolveOptions::Velocity::Target;
        so.velocity_targets = {cplx(-0.6), cplx(0.0), cplx(0.6)};
        ExperimentSpec spec;
        spec.initial =
            random_admissible({cplx(-20, 1.0), cplx(0, 1.0), cplx(20, 1.0)}, {0, 0, 1}, 11, so);
        spec.horizon = 20.0;
        spec.thresholds.eta_re = 1.0;
        const TheoremReport rep = run_separation_probe(spec);
        CHECK(rep.conclusion_witnessed);
        CHECK(rep.find("re_separation_held")->pass);
        CHECK(rep.find("min_im_above_nu")->pass);
        CHECK(rep.find("bound_witness_no_growth")->value <= 1e-3);
    }
    SUBCASE("approaching poles truncate the report at the violation") {
        const PresetResult p = two_soliton_preset(1.0, -1.0, {1.0, 1.0}, 0);
        ExperimentSpec spec;
        spec.initial = p.state;
        spec.horizon = 30.0;
        spec.thresholds.eta_re = 1.0;  // Re gap closes from 20 at rate 2
        const TheoremReport rep = run_separation_probe(spec);
        CHECK(!rep.conclusion_witnessed);
        REQUIRE(rep.event.has_value());
        CHECK(rep.event->kind == EventKind::SeparationViolation);
        CHECK(!rep.find("re_separation_held")->pass);
        CHECK(rep.notes.find("truncated") != std::string::npos);
    }
    SUBCASE("single pole passes vacuously") {
        ExperimentSpec spec;
        spec.initial = random_admissible({cplx(0, 1)}, {0, 0, 1}, 2, {});
        const TheoremReport rep = run_separation_probe(spec);
        CHECK(rep.conclusion_witnessed);
        CHECK(rep.verdicts.empty());
    }
}

TEST_CASE("verdicts are recomputable from the emitted series") {
    const PresetResult p = two_soliton_preset(0.8, -0.8, {1.0, 1.0}, 3);
    ExperimentSpec spec;
    spec.name = "recompute";
    spec.initial = p.state;
    spec.horizon = 10.0;
    spec.out_dir = ".";
    const TheoremReport rep = run_two_soliton_probe(spec);
    REQUIRE(!rep.series_path.empty());

    const TrajectoryRecord rec = read_jsonl(rep.series_path);
    double min_im = std::numeric_limits<double>::infinity();
    for (const auto& s : rec.samples)
        for (const auto& pole : s.state.poles) min_im = std::min(min_im, pole.imag());
    CHECK(min_im == doctest::Approx(rep.find("min_im_above_nu")->value).epsilon(1e-12));
    std::remove(rep.series_path.c_str());
}

TEST_CASE("sweep grids") {
    SUBCASE("3x3 grid yields 9 cells with bounded drift") {
        SweepGrid grid;
        grid.v1 = {1.0};
        grid.v2 = {-2.0, -1.0, -0.5};
        grid.heights = {0.5, 1.0, 2.0};
        grid.horizon = 5.0;
        const auto cells = sweep(grid);
        REQUIRE(cells.size() == 9);
        for (const auto& c : cells) {
            CHECK(c.ok);
            CHECK(c.spin_sum_drift <= 1e-9);
            CHECK(c.velocity_sum_drift <= 1e-9);
            CHECK(c.im_sum_drift <= 1e-9);
            if (c.velocity_mode == "targeted") CHECK(c.energy_rel_drift <= 1e-6);
        }
        write_sweep_csv(cells, "sweep_test.csv");
        std::ifstream in("sweep_test.csv");
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 10);  // header + 9 cells
        std::remove("sweep_test.csv");
    }
    SUBCASE("a failing cell is recorded without aborting the sweep") {
        SweepGrid grid;
        grid.v1 = {1.0};
        grid.v2 = {-1.0};
        grid.heights = {1.0, 0.0, 2.0};  // zero height is rejected by the preset
        grid.horizon = 2.0;
        const auto cells = sweep(grid);
        REQUIRE(cells.size() == 3);
        int ok = 0, failed = 0;
        for (const auto& c : cells) (c.ok ? ok : failed)++;
        CHECK(ok == 2);
        CHECK(failed == 1);
        CHECK(!cells[1].error.empty());
    }
    SUBCASE("empty grid is rejected") {
        SweepGrid grid;
        CHECK_THROWS_AS(sweep(grid), InvalidInput);
    }
}

}  // TEST_SUITE
