#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "strategy.hpp"

namespace scf {

struct SearchConfig {
  double temperature = 0.0;  // <= 0: estimate from a random sample at startup
  long long iterations = 200000;
  uint64_t seed = 1;
  enum class Init { baseline, all_direct, given } init = Init::baseline;
  Assignment init_state;  // used when init == given
  int trace_stride = 100; // record every n-th iteration (plus first and last)
};

struct TracePoint {
  long long iteration;
  double current_u_hat;
  double best_u_hat;
  bool accepted;
};

struct SearchTrace {
  std::vector<TracePoint> points;
  Assignment best;
  double best_u_hat = 0.0;
  long long accepted_count = 0;
  double temperature = 0.0;  // the value actually used
};

struct BaselineResult {
  Assignment phi;
  // false when the overflow cascade ran out of relays with bits left over;
  // the assignment is still returned (everything unplaced sits on the last
  // relay) and is a legal, if penalized, search start
  bool cascade_ok = true;
};

// Greedy seed strategy: everything on the direct link, then spill the
// smallest units forward through the relays in encounter order until each
// vehicle's capacity holds.
BaselineResult baseline_assign(const SemanticRepresentation& sr, const Kinematics& kin,
                               const Rates& rates, double t_max_s);

// Metropolis acceptance for a proposed move, computed in log space.
double transition_prob(double u_hat_cur, double u_hat_next, double temperature);

// Single-chain search: per iteration pick a uniformly random unit, propose a
// uniformly random different row for it, accept via transition_prob, track
// the best state seen.  Equals (in distribution) the uniformized chain whose
// per-pair rate constant is 1/(units * relays).
SearchTrace mmtsa_solve(const Problem& p, const SearchConfig& cfg);

// Estimate of a workable temperature: spread of the score over 1000 uniform
// random assignments, (p95 - p5) / 10.
double default_temperature(const Problem& p, Rng& rng);

// (relays + 1)^units, saturating at 2^63-1 on overflow
uint64_t state_count(int n_units, int n_relays);

// Exact Gibbs weights exp(-u_hat/temperature), normalized in log space.
// Errors when the state space exceeds max_states.
std::vector<double> stationary_distribution(const Problem& p, double temperature,
                                            uint64_t max_states = 1000000);

// Enumerate the whole space and return the minimizer (earliest in
// mixed-radix order on ties).
Assignment exhaustive_solve(const Problem& p, uint64_t max_states = 1000000);

// Run the uniformized chain, drop the burn-in prefix, and measure the total
// variation distance between occupancy frequencies and the Gibbs vector.
double empirical_stationary_check(const Problem& p, double temperature, long long steps,
                                  uint64_t seed, double burn_in_frac = 0.1,
                                  uint64_t max_states = 1000000);

struct MixingBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_applicable = false;   // denominator positive
  bool condition_verified = false; // temperature meets the threshold rule
  double threshold_temperature = 0.0;
};

// Spectral lower / path-coupling upper bound on the eps-mixing time of the
// uniformized chain.  u_hat_max/min are caller-supplied (exact on small
// instances, sampled bounds otherwise).
MixingBounds mixing_time_bounds(int n_units, int n_relays, double u_hat_max,
                                double u_hat_min, double epsilon, double temperature);

// helpers shared with tests: state index <-> assignment (mixed radix, unit 0
// is the least significant digit)
Assignment state_from_index(uint64_t index, int n_units, int n_relays);
uint64_t index_from_state(const Assignment& phi);

}  // namespace scf
