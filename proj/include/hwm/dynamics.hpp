#pragma once

// The spin-pole flow
//   sdot_j = -2 sum_{k!=j} (s_j x s_k) / (x_j - x_k)^2
//   xddot_j = 4 sum_{k!=j} (s_j . s_k) / (x_j - x_k)^3
// integrated with an embedded Dormand-Prince 5(4) pair, PI step control and
// event detection (blow-up approach, pole collision, separation violation).
// Samples are taken at exact step endpoints; the quartic dense output is used
// for event localisation only.

#include <optional>
#include <string>
#include <vector>

#include "hwm/conserved.hpp"
#include "hwm/state.hpp"

namespace hwm {

struct PhaseVector {
    std::vector<double> data;  // [Re/Im x_j | Re/Im xdot_j | Re/Im s_j components]
};

PhaseVector pack(const SolitonState& state);
SolitonState unpack(const PhaseVector& pv, int n, double t, const Vec3& m0);

std::vector<CVec3> spin_rates(const SolitonState& state);
std::vector<cplx> pole_accels(const SolitonState& state);

PhaseVector rhs(const SolitonState& state);

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double sample_dt = 0.1;
    double nu_blowup = 1e-6;
    double eta_collision = 1e-8;
    double eta_re = 0.0;
    bool enforce_separation = false;
    double h_min = 1e-14;
    double h_max = 0.0;  // 0: no cap beyond the sampling interval
    double tol_constraint = 1e-8;
    bool validate_initial = true;
};

enum class EventKind { BlowUpApproach, PoleCollision, SeparationViolation };

struct EventFlag {
    EventKind kind;
    int j = -1;
    int k = -1;  // -1 when the event involves a single pole
    double time = 0.0;
    double witness = 0.0;
};

struct StepSizeUnderflow : Error {
    SolitonState state;
    double h = 0.0;
    StepSizeUnderflow(const std::string& what, SolitonState s, double step)
        : Error(what), state(std::move(s)), h(step) {}
};

struct TrajectorySample {
    double t = 0.0;
    SolitonState state;
    ConservedSnapshot diagnostics;
};

struct TrajectoryRecord {
    std::vector<TrajectorySample> samples;
    std::optional<EventFlag> event;

    const SolitonState& initial() const { return samples.front().state; }
    const SolitonState& final_state() const { return samples.back().state; }
};

TrajectoryRecord integrate(const SolitonState& state, double t_end, const IntegratorOptions& opts = {});

// Integrates backward from the final sample to the initial time and returns
// the Euclidean phase-space distance to the initial state.
double reverse_check(const TrajectoryRecord& record, const IntegratorOptions& opts = {});

std::string event_kind_name(EventKind kind);
nlohmann::json to_json(const EventFlag& flag);

void write_jsonl(const TrajectoryRecord& record, const std::string& path);
TrajectoryRecord read_jsonl(const std::string& path);

}  // namespace hwm
