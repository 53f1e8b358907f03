#pragma once

#include <vector>

#include "channel.hpp"
#include "semantics.hpp"
#include "throughput.hpp"

namespace scf {

// One-hot column form of the binary assignment matrix: row_of[j] is the row
// (vehicle slot) carrying unit j.  Row 0 is the target's direct link; rows
// 1..relay_count follow encounter order.
struct Assignment {
  std::vector<int> row_of;
  int relay_count = 0;

  int rows() const { return relay_count + 1; }
  bool valid() const {
    for (int r : row_of)
      if (r < 0 || r > relay_count) return false;
    return true;
  }
};

struct ObjectiveWeights {
  double kappa1 = 0.5;   // energy weight
  double kappa2 = 0.1;   // reliability weight
  double theta_t = 1.5;  // direct-link reliability factor
  double theta_r = 0.5;  // relayed reliability factor
  double omega = 0.0;    // infeasibility penalty (sized per problem)
};

// Everything needed to score an assignment.
struct Problem {
  Kinematics kin;
  ChannelParams channel;
  Rates rates;
  SemanticRepresentation sr;
  ObjectiveWeights weights;
  double t_max_s = 0.0;
};

// Finishes a Problem: derives rates from the channel thresholds and sizes
// the penalty so any infeasible assignment scores strictly worse than every
// feasible one (worst-case per-bit energy at full range on both hops).
Problem make_problem(Kinematics kin, ChannelParams ch, SemanticRepresentation sr,
                     double kappa1, double kappa2, double theta_t, double theta_r,
                     double t_max_s);

double penalty_omega(const Problem& p);  // the sizing rule used by make_problem

struct LinkEntry {
  int vehicle_id = 0;
  double assigned_bits = 0.0;
  double v2i_end_s = 0.0;           // pre-store finishes here (starts at 0)
  double v2v_start_s = 0.0;         // forwarding window
  double v2v_end_s = 0.0;
  double cap_prestore_bits = 0.0;   // fetchable before forwarding must begin
  double cap_window_bits = 0.0;     // deliverable in the remaining window
};

struct LinkSchedule {
  double direct_bits = 0.0;
  double direct_end_s = 0.0;      // target's own download, starts at 0
  double direct_cap_bits = 0.0;
  std::vector<LinkEntry> relays;  // encounter order, zero-assignment rows included
};

// Every v2i transfer starts at t = 0; relay forwarding chains behind the
// direct download in encounter order, clamped into each v2v window.
// Zero-assignment relays produce zero-length transparent links.
LinkSchedule derive_schedule(const Assignment& phi, const SemanticRepresentation& sr,
                             const Kinematics& kin, const Rates& rates);

enum class ConstraintKind {
  relay_capacity,   // assigned bits vs min(pre-store cap, window cap)
  direct_capacity,  // direct bits vs the target's own dwell
  deadline,         // last data-carrying forward must end by t_max
};

struct Violation {
  ConstraintKind kind;
  int vehicle_id;  // -1 for the deadline constraint
  double margin;   // negative slack (bits or seconds)
};

struct FeasibilityReport {
  bool ok = true;
  std::vector<Violation> violations;
  double direct_margin_bits = 0.0;
  std::vector<double> relay_margin_bits;  // per relay, encounter order
  double deadline_margin_s = 0.0;
};

FeasibilityReport check_feasibility(const Assignment& phi, const LinkSchedule& sched,
                                    const Kinematics& kin, double t_max_s);

struct EnergyBreakdown {
  double v2i_j = 0.0;
  double v2v_j = 0.0;
  double total() const { return v2i_j + v2v_j; }
};

// Transmit energy of the scheduled links.  Windows are clamped to the
// in-range domain (power is zero beyond range), which makes the evaluation
// total even for infeasible assignments.
EnergyBreakdown total_energy(const Assignment& phi, const LinkSchedule& sched,
                             const Problem& p);

// kappa1 * energy - kappa2 * reliability (no penalty)
double objective_U(const Assignment& phi, const LinkSchedule& sched, const Problem& p);

// objective plus the penalty when any constraint is violated
double penalized_U_hat(const Assignment& phi, const Problem& p);

}  // namespace scf
