#include "replay.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "errors.hpp"

namespace scf {

std::vector<VehicleState> perturb_speeds(const std::vector<VehicleState>& predicted,
                                         double sigma_mps, Rng& rng) {
  if (sigma_mps < 0.0) fail(errc::invalid_argument, "perturbation sigma must be >= 0");
  std::vector<VehicleState> out = predicted;
  for (auto& v : out) {
    double z;
    do {
      z = rng.normal() * sigma_mps;
    } while (std::abs(z) > 3.0 * sigma_mps);
    v.speed_mps = std::max(1.0, v.speed_mps + z);
  }
  return out;
}

PositionFn motion_from_states(const RoadGeometry& geo, std::vector<VehicleState> actual) {
  auto by_id = std::make_shared<std::unordered_map<int, VehicleState>>();
  for (const auto& v : actual) (*by_id)[v.id] = v;
  const double spacing = geo.rsu_spacing_m;
  return [by_id, spacing](int id, double t) {
    auto it = by_id->find(id);
    if (it == by_id->end())
      fail(errc::invalid_argument, "no motion state for vehicle " + std::to_string(id));
    const VehicleState& v = it->second;
    if (v.id == 0) return v.offset_m + v.speed_mps * t;
    return spacing - v.offset_m - v.speed_mps * t;
  };
}

PositionFn motion_from_trace(MobilityTrace trace, const Kinematics& kin,
                             double horizon_s) {
  auto need = [&](int id) {
    if (!has_vehicle(trace, id))
      fail(errc::validation, "replay trace lacks vehicle " + std::to_string(id));
  };
  need(kin.target.id);
  for (const auto& r : kin.relays) need(r.state.id);
  if (trace.t_end + 1e-9 < horizon_s)
    fail(errc::validation, "trace ends at " + std::to_string(trace.t_end) +
                               " s, shorter than the replay horizon of " +
                               std::to_string(horizon_s) + " s");
  auto owned = std::make_shared<MobilityTrace>(std::move(trace));
  return [owned](int id, double t) { return position_at(*owned, id, t); };
}

namespace {

// remaining-bit counters for one unit; exact zero marks completion
struct Flow {
  double prestore_left = 0.0;
  double arrive_left = 0.0;
  double delivered_at = -1.0;
};

struct TargetLink {
  bool direct = false;
  int vehicle_id = 0;
  std::vector<size_t> manifest;  // unit indices, fixture order
  size_t fwd = 0;                // first unit not fully arrived
  bool entered = false;          // has been within range at least once
  bool closed = false;
  double cur_dist = 0.0;         // this step's midpoint distance
  bool cur_in_range = false;
  double open = -1.0, close_t = 0.0, bits = 0.0;
};

struct PrestoreLink {
  size_t target_link = 0;  // owner of the shared manifest
  int vehicle_id = 0;
  size_t pre = 0;  // first unit not fully pre-stored
  bool entered = false;
  bool closed = false;
  double open = -1.0, close_t = 0.0, bits = 0.0;
};

}  // namespace

ExecutionReport replay(const Problem& p, const Assignment& phi, const PositionFn& actual,
                       double step_s) {
  if (!(step_s > 0.0)) fail(errc::invalid_argument, "replay step must be > 0");
  if (phi.row_of.size() != p.sr.units.size() ||
      phi.relay_count != static_cast<int>(p.kin.relays.size()) || !phi.valid())
    fail(errc::invalid_argument, "assignment shape does not match the problem");

  const double t_max = p.t_max_s;
  const double r_i = p.channel.v2i.range_m;
  const double r_v = p.channel.v2v.range_m;
  const double rate_i = p.rates.v2i_bps;
  const double rate_v = p.rates.v2v_bps;
  const double spacing = p.kin.road.rsu_spacing_m;

  std::vector<Flow> flows(p.sr.units.size());
  std::vector<std::vector<size_t>> relay_manifest(p.kin.relays.size());
  std::vector<size_t> direct_manifest;
  for (size_t j = 0; j < p.sr.units.size(); ++j) {
    const int row = phi.row_of[j];
    flows[j].arrive_left = p.sr.units[j].beta_bits;
    if (row == 0) {
      direct_manifest.push_back(j);
    } else {
      flows[j].prestore_left = p.sr.units[j].beta_bits;
      relay_manifest[static_cast<size_t>(row - 1)].push_back(j);
    }
  }

  // target-side links in planned order: direct first, then data-carrying
  // relays by encounter order; empty rows are transparent
  std::vector<TargetLink> targets;
  std::vector<PrestoreLink> prestores;
  if (!direct_manifest.empty()) {
    TargetLink tl;
    tl.direct = true;
    tl.vehicle_id = p.kin.target.id;
    tl.manifest = std::move(direct_manifest);
    targets.push_back(std::move(tl));
  }
  for (size_t r = 0; r < p.kin.relays.size(); ++r) {
    if (relay_manifest[r].empty()) continue;
    const int vid = p.kin.relays[r].state.id;
    TargetLink tl;
    tl.vehicle_id = vid;
    tl.manifest = std::move(relay_manifest[r]);
    targets.push_back(std::move(tl));
    PrestoreLink pl;
    pl.target_link = targets.size() - 1;
    pl.vehicle_id = vid;
    prestores.push_back(pl);
  }

  ExecutionReport rep;
  const long long steps = static_cast<long long>(std::ceil(t_max / step_s - 1e-9));
  for (long long k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * step_s;
    const double dt = std::min(step_s, t_max - t0);
    const double tm = t0 + dt / 2.0;
    const double x_target = actual(0, tm);

    // pre-store hops: every relay fetches from its serving unit in parallel
    for (auto& pl : prestores) {
      if (pl.closed) continue;
      TargetLink& tl = targets[pl.target_link];
      if (pl.pre == tl.manifest.size()) {
        pl.closed = true;
        continue;
      }
      const double x_relay = actual(pl.vehicle_id, tm);
      const double d = std::abs(spacing - x_relay);
      if (d > r_i) {
        // relays drive away from their unit; once out, out for good
        if (pl.entered) pl.closed = true;
        continue;
      }
      pl.entered = true;
      double budget = rate_i * dt;
      double tx_time = 0.0;
      while (budget > 0.0 && pl.pre < tl.manifest.size()) {
        Flow& f = flows[tl.manifest[pl.pre]];
        const double take = std::min(budget, f.prestore_left);
        f.prestore_left -= take;
        budget -= take;
        tx_time += take / rate_i;
        pl.bits += take;
        if (f.prestore_left == 0.0)
          ++pl.pre;
        else
          break;
      }
      if (tx_time > 0.0) {
        rep.v2i_energy_j += avg_power(p.channel, LinkClass::v2i, d) * tx_time;
        if (pl.open < 0.0) pl.open = t0;
        pl.close_t = t0 + tx_time;
      }
    }

    // the target's single antenna: first open in-range link in planned order
    TargetLink* sel = nullptr;
    for (auto& tl : targets) {
      if (tl.closed) continue;
      if (tl.fwd == tl.manifest.size()) {
        tl.closed = true;
        continue;
      }
      tl.cur_dist = tl.direct ? std::abs(x_target)
                              : std::abs(actual(tl.vehicle_id, tm) - x_target);
      const double range = tl.direct ? r_i : r_v;
      tl.cur_in_range = tl.cur_dist <= range;
      if (tl.cur_in_range) {
        tl.entered = true;
        if (!sel) sel = &tl;
      } else if (tl.entered) {
        tl.closed = true;  // receded out of range; never comes back
      }
    }
    if (sel) {
      const double rate = sel->direct ? rate_i : rate_v;
      double budget = rate * dt;
      double tx_time = 0.0;
      while (budget > 0.0 && sel->fwd < sel->manifest.size()) {
        Flow& f = flows[sel->manifest[sel->fwd]];
        if (f.prestore_left > 0.0) break;  // store-carry-forward: not on board yet
        const double take = std::min(budget, f.arrive_left);
        f.arrive_left -= take;
        budget -= take;
        tx_time += take / rate;
        sel->bits += take;
        if (f.arrive_left == 0.0) {
          f.delivered_at = t0 + tx_time;
          ++sel->fwd;
        } else {
          break;
        }
      }
      if (tx_time > 0.0) {
        const double pw = avg_power(p.channel, sel->direct ? LinkClass::v2i : LinkClass::v2v,
                                    sel->cur_dist);
        (sel->direct ? rep.v2i_energy_j : rep.v2v_energy_j) += pw * tx_time;
        if (sel->open < 0.0) sel->open = t0;
        sel->close_t = t0 + tx_time;
      }
    }
  }

  for (size_t j = 0; j < flows.size(); ++j) {
    if (flows[j].arrive_left == 0.0) {
      rep.delivered_units.push_back(p.sr.units[j].id);
      rep.realized_accuracy += p.sr.units[j].alpha;
      rep.completion_s = std::max(rep.completion_s, flows[j].delivered_at);
    }
  }
  const double total = rep.v2i_energy_j + rep.v2v_energy_j;
  rep.ee_s_per_j = total > 0.0 ? rep.realized_accuracy / total : 0.0;

  for (size_t i = 0; i < targets.size(); ++i) {
    const TargetLink& tl = targets[i];
    if (tl.direct) {
      rep.links.push_back({"v2i_direct", tl.vehicle_id, std::max(tl.open, 0.0),
                           tl.close_t, tl.bits});
    } else {
      for (const auto& pl : prestores) {
        if (pl.target_link != i) continue;
        rep.links.push_back({"v2i_prestore", pl.vehicle_id, std::max(pl.open, 0.0),
                             pl.close_t, pl.bits});
      }
      rep.links.push_back({"v2v_forward", tl.vehicle_id, std::max(tl.open, 0.0),
                           tl.close_t, tl.bits});
    }
  }
  return rep;
}

ExecutionReport replay_with_spec(const Problem& p, const Assignment& phi,
                                 const PerturbationSpec& pert, uint64_t seed,
                                 double step_s) {
  if (pert.mode == PerturbationSpec::Mode::trace)
    fail(errc::invalid_argument,
         "trace replay needs an explicit mobility trace (use motion_from_trace)");
  std::vector<VehicleState> vehicles;
  vehicles.push_back(p.kin.target);
  for (const auto& r : p.kin.relays) vehicles.push_back(r.state);
  if (pert.mode == PerturbationSpec::Mode::gaussian && pert.sigma_mps > 0.0) {
    Rng rng(seed);
    vehicles = perturb_speeds(vehicles, pert.sigma_mps, rng);
  }
  return replay(p, phi, motion_from_states(p.kin.road, vehicles), step_s);
}

}  // namespace scf
