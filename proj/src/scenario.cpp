#include "scenario.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace scf {

void validate(const RoadGeometry& geo) {
  if (!(geo.rsu_radius_m > 0.0))
    fail(errc::validation, "road.rsu_radius_m must be > 0");
  if (!(geo.vehicle_radius_m > 0.0))
    fail(errc::validation, "road.vehicle_radius_m must be > 0");
  if (!(geo.rsu_spacing_m > 2.0 * geo.rsu_radius_m))
    fail(errc::validation,
         "road.rsu_spacing_m must exceed twice rsu_radius_m (the cells may not overlap)");
}

static void validate_vehicle(const VehicleState& v, const RoadGeometry& geo) {
  if (!(v.speed_mps > 0.0))
    fail(errc::validation, "vehicle " + std::to_string(v.id) + ": speed_mps must be > 0");
  if (std::abs(v.offset_m) > geo.rsu_radius_m)
    fail(errc::validation, "vehicle " + std::to_string(v.id) +
                               ": offset_m must start inside the serving cell");
}

double dwell_time(const VehicleState& v, const RoadGeometry& geo) {
  return (geo.rsu_radius_m - v.offset_m) / v.speed_mps;
}

double encounter_time(const VehicleState& relay, const VehicleState& target,
                      const RoadGeometry& geo) {
  const double gap = geo.rsu_spacing_m - target.offset_m - relay.offset_m;
  return (gap - geo.vehicle_radius_m) / (relay.speed_mps + target.speed_mps);
}

double v2v_window(const VehicleState& relay, const VehicleState& target,
                  const RoadGeometry& geo) {
  return 2.0 * geo.vehicle_radius_m / (relay.speed_mps + target.speed_mps);
}

double v2i_distance_at(const VehicleState& v, double t) {
  return std::abs(v.offset_m + v.speed_mps * t);
}

double v2v_distance_at(const VehicleState& relay, const VehicleState& target,
                       const RoadGeometry& geo, double t) {
  const double closing = relay.speed_mps + target.speed_mps;
  const double delta = encounter_time(relay, target, geo);
  return std::abs(geo.vehicle_radius_m - closing * (t - delta));
}

Kinematics predict(const RoadGeometry& geo, const VehicleState& target,
                   const std::vector<VehicleState>& relays,
                   std::vector<std::string>* warnings) {
  validate(geo);
  validate_vehicle(target, geo);

  Kinematics kin;
  kin.road = geo;
  kin.target = target;
  kin.target_dwell_s = dwell_time(target, geo);

  for (const auto& r : relays) {
    validate_vehicle(r, geo);
    RelayTiming t;
    t.state = r;
    t.closing_speed_mps = r.speed_mps + target.speed_mps;
    t.dwell_s = dwell_time(r, geo);
    t.encounter_s = encounter_time(r, target, geo);
    t.window_s = v2v_window(r, target, geo);
    if (t.encounter_s < 0.0) {
      // pair already within range (or past each other) at t = 0; the
      // prediction model cannot schedule anything useful on it
      kin.excluded_ids.push_back(r.id);
      if (warnings)
        warnings->push_back("relay " + std::to_string(r.id) +
                            " excluded: v2v window opens before t=0");
      continue;
    }
    kin.relays.push_back(t);
  }
  std::stable_sort(kin.relays.begin(), kin.relays.end(),
                   [](const RelayTiming& a, const RelayTiming& b) {
                     if (a.encounter_s != b.encounter_s) return a.encounter_s < b.encounter_s;
                     return a.state.id < b.state.id;
                   });
  return kin;
}

}  // namespace scf
