#pragma once

#include <map>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace scf {

struct TraceSample {
  double t = 0.0;
  double pos_m = 0.0;    // longitudinal position, unit A at 0, increasing toward B
  double speed_mps = 0.0;  // signed: positive = toward B (target), negative = toward A
};

// Floating-car data for one scenario.  Vehicle 0 is the target by
// convention; every other id is a relay candidate.
struct MobilityTrace {
  std::map<int, std::vector<TraceSample>> samples;  // per vehicle, time-ascending
  double t_begin = 0.0;
  double t_end = 0.0;
};

// Read a `t,vehicle_id,pos_m,speed_mps` CSV.  Checks per-vehicle time
// monotonicity and position/speed continuity.
MobilityTrace load_trace(const std::string& path, double continuity_tol_m = 0.5);

// Planner's view of a trace: signed offsets at t=0 translated into each
// vehicle's serving-unit frame, speeds averaged over the horizon.  The
// first element is the target.
std::vector<VehicleState> planner_view(const MobilityTrace& trace, const RoadGeometry& geo);

// linear interpolation; clamps before the first sample, errors past the last
double position_at(const MobilityTrace& trace, int vehicle_id, double t);

bool has_vehicle(const MobilityTrace& trace, int vehicle_id);

// Synthesize a constant-speed trace from a scenario (useful as a fixture and
// for round-trip tests).
void write_trace(const std::string& path, const RoadGeometry& geo,
                 const std::vector<VehicleState>& vehicles, double step_s,
                 double horizon_s);

}  // namespace scf
