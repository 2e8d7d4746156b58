#pragma once

// Scripted probes of the non-blow-up statements at finite horizon, plus
// parameter sweeps. Reports never claim more than the run shows: every
// verdict carries the witnessed value, and infinite-time statements are
// reported as "witnessed up to T".

#include <optional>
#include <string>
#include <vector>

#include "hwm/dynamics.hpp"

namespace hwm {

struct Thresholds {
    double nu = 1e-6;           // blow-up approach floor for Im x
    double eta_collision = 1e-8;
    double eta_re = 0.5;        // Re-separation assumption
};

struct ExperimentSpec {
    std::string name;
    SolitonState initial;
    double horizon = 50.0;
    double sample_dt = 0.05;
    Thresholds thresholds;
    IntegratorOptions integrator;
    std::vector<double> target_velocities;  // asymptotic slopes to check
    std::string out_dir;                    // empty: keep everything in memory
};

struct MonitorVerdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct TheoremReport {
    std::string theorem;
    double horizon = 0.0;
    bool outside_hypotheses = false;
    std::vector<MonitorVerdict> verdicts;
    bool conclusion_witnessed = false;
    std::optional<EventFlag> event;
    std::string notes;
    std::string series_path;  // JSONL written when out_dir was given

    const MonitorVerdict* find(const std::string& name) const;
};

// Two-soliton run: checks that min Im x stays positive, that Re x_j(t) fits
// v_j t - alpha_j with the requested slopes and a decaying remainder, and
// that the spin norms show no growth trend.
TheoremReport run_two_soliton_probe(const ExperimentSpec& spec);

// N >= 2 run under the Re-separation assumption: while separation holds,
// min Im x must stay above nu and the bound witness must not grow. If
// separation breaks, the record and report truncate there.
TheoremReport run_separation_probe(const ExperimentSpec& spec);

nlohmann::json to_json(const TheoremReport& report);

struct SweepGrid {
    std::vector<double> v1{1.0};
    std::vector<double> v2;
    std::vector<double> heights;
    double horizon = 10.0;
    double sample_dt = 0.1;
    std::uint64_t seed = 0;
    IntegratorOptions integrator;
};

struct SweepCell {
    double v1 = 0.0, v2 = 0.0, height = 0.0;
    bool ok = false;
    std::string velocity_mode;  // "targeted": PDE-valid, J drift is meaningful
    std::string error;
    double min_im = 0.0;
    double max_spin = 0.0;
    double spin_sum_drift = 0.0;
    double velocity_sum_drift = 0.0;
    double im_sum_drift = 0.0;
    double energy_rel_drift = 0.0;
};

// Runs the grid cells as independent trajectories (parallel up to
// HWM_THREADS); failures land in the cell, never abort the sweep.
std::vector<SweepCell> sweep(const SweepGrid& grid);

void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path);

// Least-squares slope/intercept of y(t); helper for the asymptotics fits.
std::pair<double, double> linear_fit(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace hwm
