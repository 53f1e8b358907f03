#pragma once

#include <string>
#include <vector>

namespace scf {

// One straight road segment with a serving unit at each end.  Unit A sits at
// x = 0, unit B at x = rsu_spacing_m; their radio cells do not overlap
// (spacing > 2 * rsu_radius), so a dead zone exists between them.
struct RoadGeometry {
  double rsu_spacing_m = 1500.0;    // H: distance between the two roadside units
  double rsu_radius_m = 500.0;      // r_I: roadside-unit cell radius
  double vehicle_radius_m = 300.0;  // r_V: vehicle-to-vehicle radio range
};

// A vehicle described in the frame of its own serving unit: signed offset
// along the direction of travel, and average cruise speed.  The target
// vehicle (id 0) drives from A toward B; relay vehicles drive the opposite
// way, from B toward A.
struct VehicleState {
  int id = 0;
  double offset_m = 0.0;   // position past the serving unit at t = 0
  double speed_mps = 0.0;  // average speed, must be > 0
};

struct RelayTiming {
  VehicleState state;
  double closing_speed_mps = 0.0;  // relay speed + target speed
  double dwell_s = 0.0;            // time left inside the serving cell
  double encounter_s = 0.0;        // when the pair comes within v2v range
  double window_s = 0.0;           // how long they stay within v2v range
};

struct Kinematics {
  RoadGeometry road;
  VehicleState target;
  double target_dwell_s = 0.0;
  // sorted by nondecreasing encounter time (ties by id)
  std::vector<RelayTiming> relays;
  // relays whose v2v window already started before t = 0; they are dropped
  std::vector<int> excluded_ids;
};

void validate(const RoadGeometry& geo);

// remaining time inside the serving cell: (r_I - offset) / speed
double dwell_time(const VehicleState& v, const RoadGeometry& geo);

// when the oncoming relay enters the target's v2v range
double encounter_time(const VehicleState& relay, const VehicleState& target,
                      const RoadGeometry& geo);

// length of the in-range period, 2 r_V / closing-speed
double v2v_window(const VehicleState& relay, const VehicleState& target,
                  const RoadGeometry& geo);

// distance from the vehicle to its serving unit at time t
double v2i_distance_at(const VehicleState& v, double t);

// distance between relay and target at time t (valid for all t >= 0 under
// the constant-speed model)
double v2v_distance_at(const VehicleState& relay, const VehicleState& target,
                       const RoadGeometry& geo, double t);

// Assemble the full timing picture for a scenario.  Relays with a v2v window
// opening in the past are excluded (one warning string each, if requested);
// the rest are sorted by encounter time.
Kinematics predict(const RoadGeometry& geo, const VehicleState& target,
                   const std::vector<VehicleState>& relays,
                   std::vector<std::string>* warnings = nullptr);

}  // namespace scf
