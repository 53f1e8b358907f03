#pragma once

#include <vector>

#include "intervals.hpp"
#include "scenario.hpp"

namespace scf {

struct Rates {
  double v2i_bps = 0.0;
  double v2v_bps = 0.0;
};

struct RelayChainEntry {
  int vehicle_id = 0;
  double forward_start_s = 0.0;    // earliest usable forwarding moment
  double prestore_cap_bits = 0.0;  // what the relay can have on board by then
  IntervalSet cumulative;          // all forwarding time secured so far
};

struct ThroughputAnalysis {
  Rates rates;
  double direct_window_s = 0.0;  // target's own serving-cell dwell
  std::vector<RelayChainEntry> chain;
  IntervalSet coverage;  // final cumulative forwarding set
};

// Earliest time relay can start forwarding: its window opening, pushed back
// by the target's own download (first relay) or by forwarding time already
// claimed inside its window by earlier relays.
double forward_start(const RelayTiming& relay, const IntervalSet& previous,
                     bool first, double target_dwell_s);

// Bits the relay can have fetched from its serving unit before it must
// start forwarding.
double prestore_cap(const RelayTiming& relay, double forward_start_s, const Rates& rates);

// Fold every relay (in encounter order) into the cumulative forwarding set.
ThroughputAnalysis cumulative_links(const Kinematics& kin, const Rates& rates);

// Bits the target can collect by the deadline: its own direct download plus
// relayed forwarding time inside [0, t_max] that falls after the direct phase.
double achievable_throughput(const ThroughputAnalysis& analysis, double t_max_s);

}  // namespace scf
