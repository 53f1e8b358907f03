#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "rng.hpp"
#include "strategy.hpp"
#include "trace.hpp"

namespace scf {

struct LinkLogEntry {
  std::string kind;  // "v2i_direct" | "v2i_prestore" | "v2v_forward"
  int vehicle_id = 0;
  double open_s = 0.0;   // first instant the link moved bits
  double close_s = 0.0;  // last instant it moved bits
  double bits_moved = 0.0;
};

// What actually happened when the planned schedule met (possibly different)
// actual kinematics.
struct ExecutionReport {
  std::vector<std::string> delivered_units;  // fully arrived before the deadline
  double realized_accuracy = 0.0;
  double v2i_energy_j = 0.0;
  double v2v_energy_j = 0.0;
  double completion_s = 0.0;  // when the last delivered unit finished
  double ee_s_per_j = 0.0;    // realized accuracy per joule
  std::vector<LinkLogEntry> links;
};

// Actual longitudinal position (road coordinate, unit A at x = 0) of a
// vehicle at time t.
using PositionFn = std::function<double(int vehicle_id, double t)>;

// Gaussian speed error, truncated at +-3 sigma, floored at 1 m/s.  Draws in
// list order so the result is a pure function of (predicted, sigma, rng).
std::vector<VehicleState> perturb_speeds(const std::vector<VehicleState>& predicted,
                                         double sigma_mps, Rng& rng);

// Constant-speed motion from per-vehicle states (target toward B, relays
// toward A).
PositionFn motion_from_states(const RoadGeometry& geo, std::vector<VehicleState> actual);

// Motion read off a recorded trace.  Fails if the trace lacks a planned
// vehicle or ends before the replay horizon.
PositionFn motion_from_trace(MobilityTrace trace, const Kinematics& kin,
                             double horizon_s);

// Time-stepped execution of the planned assignment against actual motion.
// The planned link order is kept: the target listens to its own serving
// unit first, then to each data-carrying relay in encounter order, one
// link at a time; a relay forwards only units it has fully pre-stored.
// Energy integrates the average transmit power at the midpoint distance of
// each step, so it converges to the closed-form planned totals as the step
// shrinks.
ExecutionReport replay(const Problem& p, const Assignment& phi, const PositionFn& actual,
                       double step_s);

// Convenience wrapper for the none/gaussian perturbation modes.
ExecutionReport replay_with_spec(const Problem& p, const Assignment& phi,
                                 const PerturbationSpec& pert, uint64_t seed,
                                 double step_s);

}  // namespace scf
