#include "strategy.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace scf {

Problem make_problem(Kinematics kin, ChannelParams ch, SemanticRepresentation sr,
                     double kappa1, double kappa2, double theta_t, double theta_r,
                     double t_max_s) {
  validate(ch);
  if (kappa1 < 0.0 || kappa2 < 0.0)
    fail(errc::validation, "objective weights must be >= 0");
  if (!(theta_t > theta_r) || !(theta_r > 0.0))
    fail(errc::validation, "need theta_t > theta_r > 0");
  if (!(t_max_s > 0.0)) fail(errc::validation, "t_max must be > 0");

  Problem p;
  p.kin = std::move(kin);
  p.channel = std::move(ch);
  p.sr = std::move(sr);
  p.rates.v2i_bps = link_rate(p.channel.v2i.bandwidth_hz, p.channel.v2i.snr_threshold);
  p.rates.v2v_bps = link_rate(p.channel.v2v.bandwidth_hz, p.channel.v2v.snr_threshold);
  p.weights.kappa1 = kappa1;
  p.weights.kappa2 = kappa2;
  p.weights.theta_t = theta_t;
  p.weights.theta_r = theta_r;
  p.t_max_s = t_max_s;
  p.weights.omega = penalty_omega(p);
  return p;
}

double penalty_omega(const Problem& p) {
  // worst case: every bit pays the full-range per-bit price on both hops
  const double per_bit =
      avg_power_or_zero(p.channel, LinkClass::v2i, p.channel.v2i.range_m) / p.rates.v2i_bps +
      avg_power_or_zero(p.channel, LinkClass::v2v, p.channel.v2v.range_m) / p.rates.v2v_bps;
  const double energy_ub = sr_volume(p.sr) * per_bit;
  return 10.0 * (p.weights.kappa1 * energy_ub +
                 p.weights.kappa2 * p.weights.theta_t * sr_accuracy(p.sr));
}

static std::vector<double> row_bits(const Assignment& phi, const SemanticRepresentation& sr) {
  if (phi.row_of.size() != sr.units.size())
    fail(errc::invalid_argument, "assignment/unit count mismatch");
  if (!phi.valid()) fail(errc::invalid_argument, "assignment row out of range");
  std::vector<double> bits(phi.rows(), 0.0);
  for (size_t j = 0; j < phi.row_of.size(); ++j)
    bits[phi.row_of[j]] += sr.units[j].beta_bits;
  return bits;
}

// Internal: schedule from per-row bit loads.  Kept separate so the baseline
// cascade can reuse the same chain arithmetic while loads are in flux.
static LinkSchedule schedule_from_loads(const std::vector<double>& bits,
                                        const Kinematics& kin, const Rates& rates) {
  LinkSchedule s;
  s.direct_bits = bits[0];
  s.direct_end_s = bits[0] / rates.v2i_bps;
  s.direct_cap_bits = rates.v2i_bps * kin.target_dwell_s;

  double prev_end = s.direct_end_s;
  for (size_t i = 0; i < kin.relays.size(); ++i) {
    const RelayTiming& r = kin.relays[i];
    const double window_end = r.encounter_s + r.window_s;
    LinkEntry e;
    e.vehicle_id = r.state.id;
    e.assigned_bits = bits[i + 1];
    e.v2i_end_s = e.assigned_bits / rates.v2i_bps;
    e.v2v_start_s = std::min(std::max(r.encounter_s, prev_end), window_end);
    e.v2v_end_s = e.v2v_start_s + e.assigned_bits / rates.v2v_bps;
    e.cap_prestore_bits = rates.v2i_bps * std::min(r.dwell_s, e.v2v_start_s);
    e.cap_window_bits = rates.v2v_bps * (window_end - e.v2v_start_s);
    prev_end = e.v2v_end_s;
    s.relays.push_back(e);
  }
  return s;
}

LinkSchedule derive_schedule(const Assignment& phi, const SemanticRepresentation& sr,
                             const Kinematics& kin, const Rates& rates) {
  if (phi.relay_count != static_cast<int>(kin.relays.size()))
    fail(errc::invalid_argument, "assignment relay count does not match scenario");
  return schedule_from_loads(row_bits(phi, sr), kin, rates);
}

FeasibilityReport check_feasibility(const Assignment& phi, const LinkSchedule& sched,
                                    const Kinematics& kin, double t_max_s) {
  (void)phi;
  FeasibilityReport rep;
  rep.direct_margin_bits = sched.direct_cap_bits - sched.direct_bits;
  if (rep.direct_margin_bits < 0.0) {
    rep.ok = false;
    rep.violations.push_back(
        {ConstraintKind::direct_capacity, kin.target.id, rep.direct_margin_bits});
  }

  double last_forward_end = 0.0;
  bool any_forward = false;
  for (const auto& e : sched.relays) {
    const double margin =
        std::min(e.cap_prestore_bits, e.cap_window_bits) - e.assigned_bits;
    rep.relay_margin_bits.push_back(margin);
    if (e.assigned_bits > 0.0 && margin < 0.0) {
      rep.ok = false;
      rep.violations.push_back({ConstraintKind::relay_capacity, e.vehicle_id, margin});
    }
    if (e.assigned_bits > 0.0) {
      any_forward = true;
      last_forward_end = std::max(last_forward_end, e.v2v_end_s);
    }
  }

  // deadline applies to data-carrying forwards; an idle relay's zero-length
  // link is no link at all
  rep.deadline_margin_s = any_forward ? t_max_s - last_forward_end : t_max_s;
  if (any_forward && rep.deadline_margin_s < 0.0) {
    rep.ok = false;
    rep.violations.push_back({ConstraintKind::deadline, -1, rep.deadline_margin_s});
  }
  return rep;
}

EnergyBreakdown total_energy(const Assignment& phi, const LinkSchedule& sched,
                             const Problem& p) {
  (void)phi;
  EnergyBreakdown e;

  // direct download: clamp to the target's dwell (out of range afterwards)
  const double direct_end = std::min(sched.direct_end_s, p.kin.target_dwell_s);
  if (direct_end > 0.0)
    e.v2i_j += energy_v2i_profile(p.channel, p.kin.target.offset_m,
                                  p.kin.target.speed_mps, 0.0, direct_end);

  for (size_t i = 0; i < sched.relays.size(); ++i) {
    const LinkEntry& le = sched.relays[i];
    if (le.assigned_bits <= 0.0) continue;
    const RelayTiming& r = p.kin.relays[i];

    const double pre_end = std::min(le.v2i_end_s, r.dwell_s);
    if (pre_end > 0.0)
      e.v2i_j += energy_v2i_profile(p.channel, r.state.offset_m, r.state.speed_mps, 0.0,
                                    pre_end);

    const double window_end = r.encounter_s + r.window_s;
    const double fwd_end = std::min(le.v2v_end_s, window_end);
    if (fwd_end > le.v2v_start_s)
      e.v2v_j += energy_v2v_profile(p.channel, r.encounter_s, r.window_s,
                                    r.closing_speed_mps, le.v2v_start_s, fwd_end);
  }
  return e;
}

double objective_U(const Assignment& phi, const LinkSchedule& sched, const Problem& p) {
  const EnergyBreakdown e = total_energy(phi, sched, p);
  const double theta =
      semantic_reliability(phi.row_of, p.sr, p.weights.theta_t, p.weights.theta_r);
  return p.weights.kappa1 * e.total() - p.weights.kappa2 * theta;
}

double penalized_U_hat(const Assignment& phi, const Problem& p) {
  const LinkSchedule sched = derive_schedule(phi, p.sr, p.kin, p.rates);
  const double u = objective_U(phi, sched, p);
  const FeasibilityReport rep = check_feasibility(phi, sched, p.kin, p.t_max_s);
  return rep.ok ? u : u + p.weights.omega;
}

}  // namespace scf
