#include "throughput.hpp"

#include <algorithm>

#include "errors.hpp"

namespace scf {

double forward_start(const RelayTiming& relay, const IntervalSet& previous, bool first,
                     double target_dwell_s) {
  if (first) return std::max(relay.encounter_s, target_dwell_s);
  const IntervalSet window =
      IntervalSet::single(relay.encounter_s, relay.encounter_s + relay.window_s);
  return relay.encounter_s + previous.intersect(window).measure();
}

double prestore_cap(const RelayTiming& relay, double forward_start_s, const Rates& rates) {
  return rates.v2i_bps * std::min(relay.dwell_s, forward_start_s);
}

ThroughputAnalysis cumulative_links(const Kinematics& kin, const Rates& rates) {
  if (!(rates.v2i_bps > 0.0) || !(rates.v2v_bps > 0.0))
    fail(errc::invalid_argument, "cumulative_links: rates must be positive");

  ThroughputAnalysis out;
  out.rates = rates;
  out.direct_window_s = kin.target_dwell_s;

  IntervalSet acc;
  bool first = true;
  for (const auto& relay : kin.relays) {
    RelayChainEntry e;
    e.vehicle_id = relay.state.id;
    e.forward_start_s = forward_start(relay, acc, first, kin.target_dwell_s);
    e.prestore_cap_bits = prestore_cap(relay, e.forward_start_s, rates);
    const double window_end = relay.encounter_s + relay.window_s;
    const double end =
        std::min(e.forward_start_s + e.prestore_cap_bits / rates.v2v_bps, window_end);
    // a relay that can pre-store nothing contributes an empty piece
    acc = acc.unite(IntervalSet::single(e.forward_start_s, end));
    e.cumulative = acc;
    out.chain.push_back(std::move(e));
    first = false;
  }
  out.coverage = acc;
  return out;
}

double achievable_throughput(const ThroughputAnalysis& analysis, double t_max_s) {
  if (!(t_max_s >= 0.0)) fail(errc::invalid_argument, "achievable_throughput: negative deadline");
  const IntervalSet horizon = IntervalSet::single(0.0, t_max_s);
  const IntervalSet direct_phase = IntervalSet::single(0.0, analysis.direct_window_s);
  const double relayed_time =
      analysis.coverage.intersect(horizon).subtract(direct_phase).measure();
  return analysis.rates.v2i_bps * analysis.direct_window_s +
         analysis.rates.v2v_bps * relayed_time;
}

}  // namespace scf
