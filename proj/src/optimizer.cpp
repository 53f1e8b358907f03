#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace scf {

BaselineResult baseline_assign(const SemanticRepresentation& sr, const Kinematics& kin,
                               const Rates& rates, double t_max_s) {
  // The cascade packs against link capacities; the deadline is checked by the
  // caller via check_feasibility on the returned assignment.
  (void)t_max_s;
  const int n = static_cast<int>(sr.units.size());
  const int relays = static_cast<int>(kin.relays.size());
  if (n == 0) fail(errc::invalid_argument, "baseline_assign: empty unit list");

  BaselineResult res;
  res.phi.relay_count = relays;
  res.phi.row_of.assign(n, 0);

  auto load_of = [&](int row) {
    double bits = 0.0;
    for (int j = 0; j < n; ++j)
      if (res.phi.row_of[j] == row) bits += sr.units[j].beta_bits;
    return bits;
  };
  auto smallest_in = [&](int row) {
    int pick = -1;
    for (int j = 0; j < n; ++j) {
      if (res.phi.row_of[j] != row) continue;
      if (pick < 0 || sr.units[j].beta_bits < sr.units[pick].beta_bits) pick = j;
    }
    return pick;  // ties keep the lower index by construction
  };

  double prev_end = 0.0;
  for (int i = 0; i <= relays; ++i) {
    double cap, start = 0.0;
    if (i == 0) {
      cap = rates.v2i_bps * kin.target_dwell_s;
    } else {
      const RelayTiming& r = kin.relays[i - 1];
      const double window_end = r.encounter_s + r.window_s;
      start = std::min(std::max(r.encounter_s, prev_end), window_end);
      cap = std::min(rates.v2i_bps * std::min(r.dwell_s, start),
                     rates.v2v_bps * (window_end - start));
    }
    double load = load_of(i);
    while (load > cap) {
      if (i == relays) {
        res.cascade_ok = false;  // nowhere left to push the overflow
        break;
      }
      const int pick = smallest_in(i);
      if (pick < 0) break;
      res.phi.row_of[pick] = i + 1;
      load -= sr.units[pick].beta_bits;
    }
    prev_end = (i == 0) ? load / rates.v2i_bps : start + load / rates.v2v_bps;
  }
  return res;
}

double transition_prob(double u_hat_cur, double u_hat_next, double temperature) {
  if (!(temperature > 0.0))
    fail(errc::invalid_argument, "transition_prob: temperature must be > 0");
  if (u_hat_next <= u_hat_cur) return 1.0;
  return std::exp((u_hat_cur - u_hat_next) / temperature);
}

double default_temperature(const Problem& p, Rng& rng) {
  const int n = static_cast<int>(p.sr.units.size());
  const int rows = static_cast<int>(p.kin.relays.size()) + 1;
  std::vector<double> scores;
  scores.reserve(1000);
  Assignment phi;
  phi.relay_count = rows - 1;
  phi.row_of.resize(n);
  for (int s = 0; s < 1000; ++s) {
    for (int j = 0; j < n; ++j)
      phi.row_of[j] = static_cast<int>(rng.below(static_cast<uint64_t>(rows)));
    scores.push_back(penalized_U_hat(phi, p));
  }
  std::sort(scores.begin(), scores.end());
  auto quantile = [&](double q) {
    const double pos = q * (scores.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, scores.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return scores[lo] * (1.0 - frac) + scores[hi] * frac;
  };
  const double spread = quantile(0.95) - quantile(0.05);
  return spread > 0.0 ? spread / 10.0 : 1.0;
}

SearchTrace mmtsa_solve(const Problem& p, const SearchConfig& cfg) {
  const int n = static_cast<int>(p.sr.units.size());
  const int relays = static_cast<int>(p.kin.relays.size());
  if (cfg.iterations < 1) fail(errc::invalid_argument, "mmtsa_solve: iterations must be >= 1");
  if (cfg.trace_stride < 1) fail(errc::invalid_argument, "mmtsa_solve: trace stride must be >= 1");

  Assignment cur;
  switch (cfg.init) {
    case SearchConfig::Init::baseline:
      cur = baseline_assign(p.sr, p.kin, p.rates, p.t_max_s).phi;
      break;
    case SearchConfig::Init::all_direct:
      cur.relay_count = relays;
      cur.row_of.assign(n, 0);
      break;
    case SearchConfig::Init::given:
      cur = cfg.init_state;
      if (static_cast<int>(cur.row_of.size()) != n || cur.relay_count != relays ||
          !cur.valid())
        fail(errc::invalid_argument, "mmtsa_solve: bad initial state");
      break;
  }

  Rng rng(cfg.seed);
  SearchTrace trace;
  trace.temperature = cfg.temperature;
  if (!(trace.temperature > 0.0)) {
    Rng est = rng.fork(1);  // keep the estimate off the chain's stream
    trace.temperature = default_temperature(p, est);
  }

  double u_cur = penalized_U_hat(cur, p);
  trace.best = cur;
  trace.best_u_hat = u_cur;
  trace.points.push_back({0, u_cur, u_cur, false});

  if (relays == 0) return trace;  // single-row space: nothing to propose

  for (long long it = 1; it <= cfg.iterations; ++it) {
    const int j = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    const int old_row = cur.row_of[j];
    // uniform over the other rows
    int alt = static_cast<int>(rng.below(static_cast<uint64_t>(relays)));
    if (alt >= old_row) ++alt;

    cur.row_of[j] = alt;
    const double u_next = penalized_U_hat(cur, p);
    const double pr = transition_prob(u_cur, u_next, trace.temperature);
    const bool accepted = rng.uniform() < pr;
    if (accepted) {
      u_cur = u_next;
      ++trace.accepted_count;
      if (u_cur < trace.best_u_hat) {
        trace.best_u_hat = u_cur;
        trace.best = cur;
      }
    } else {
      cur.row_of[j] = old_row;
    }
    if (it % cfg.trace_stride == 0 || it == cfg.iterations)
      trace.points.push_back({it, u_cur, trace.best_u_hat, accepted});
  }
  return trace;
}

uint64_t state_count(int n_units, int n_relays) {
  const uint64_t base = static_cast<uint64_t>(n_relays) + 1;
  uint64_t count = 1;
  for (int j = 0; j < n_units; ++j) {
    if (count > UINT64_MAX / base) return UINT64_MAX;
    count *= base;
  }
  return count;
}

Assignment state_from_index(uint64_t index, int n_units, int n_relays) {
  Assignment phi;
  phi.relay_count = n_relays;
  phi.row_of.resize(n_units);
  const uint64_t base = static_cast<uint64_t>(n_relays) + 1;
  for (int j = 0; j < n_units; ++j) {
    phi.row_of[j] = static_cast<int>(index % base);
    index /= base;
  }
  return phi;
}

uint64_t index_from_state(const Assignment& phi) {
  const uint64_t base = static_cast<uint64_t>(phi.relay_count) + 1;
  uint64_t index = 0;
  for (size_t j = phi.row_of.size(); j-- > 0;)
    index = index * base + static_cast<uint64_t>(phi.row_of[j]);
  return index;
}

static std::vector<double> score_table(const Problem& p, uint64_t max_states) {
  const int n = static_cast<int>(p.sr.units.size());
  const int relays = static_cast<int>(p.kin.relays.size());
  const uint64_t total = state_count(n, relays);
  if (total > max_states)
    fail(errc::state_space, "state space too large for exact enumeration (" +
                                std::to_string(total) + " states)");
  std::vector<double> u(total);
  for (uint64_t s = 0; s < total; ++s)
    u[s] = penalized_U_hat(state_from_index(s, n, relays), p);
  return u;
}

std::vector<double> stationary_distribution(const Problem& p, double temperature,
                                            uint64_t max_states) {
  if (!(temperature > 0.0))
    fail(errc::invalid_argument, "stationary_distribution: temperature must be > 0");
  const std::vector<double> u = score_table(p, max_states);
  std::vector<double> logw(u.size());
  double max_logw = -std::numeric_limits<double>::infinity();
  for (size_t s = 0; s < u.size(); ++s) {
    logw[s] = -u[s] / temperature;
    max_logw = std::max(max_logw, logw[s]);
  }
  double z = 0.0;
  for (double lw : logw) z += std::exp(lw - max_logw);
  const double log_z = max_logw + std::log(z);
  std::vector<double> pi(u.size());
  for (size_t s = 0; s < u.size(); ++s) pi[s] = std::exp(logw[s] - log_z);
  return pi;
}

Assignment exhaustive_solve(const Problem& p, uint64_t max_states) {
  const int n = static_cast<int>(p.sr.units.size());
  const int relays = static_cast<int>(p.kin.relays.size());
  const std::vector<double> u = score_table(p, max_states);
  uint64_t best = 0;
  for (uint64_t s = 1; s < u.size(); ++s)
    if (u[s] < u[best]) best = s;  // ties keep the earliest (lexicographic) state
  return state_from_index(best, n, relays);
}

double empirical_stationary_check(const Problem& p, double temperature, long long steps,
                                  uint64_t seed, double burn_in_frac,
                                  uint64_t max_states) {
  if (!(temperature > 0.0))
    fail(errc::invalid_argument, "empirical_stationary_check: temperature must be > 0");
  if (burn_in_frac < 0.0 || burn_in_frac >= 1.0)
    fail(errc::invalid_argument, "empirical_stationary_check: burn-in fraction in [0,1)");
  const long long burn = static_cast<long long>(steps * burn_in_frac);
  if (steps <= 0 || steps - burn <= 0)
    fail(errc::invalid_argument, "empirical_stationary_check: empty post-burn-in sample");

  const int n = static_cast<int>(p.sr.units.size());
  const int relays = static_cast<int>(p.kin.relays.size());
  if (relays == 0)
    fail(errc::invalid_argument, "empirical_stationary_check: needs at least one relay");
  const std::vector<double> u = score_table(p, max_states);
  const std::vector<double> pi = stationary_distribution(p, temperature, max_states);

  // digit place values for O(1) single-unit moves on the state index
  const uint64_t base = static_cast<uint64_t>(relays) + 1;
  std::vector<uint64_t> place(n);
  uint64_t pw = 1;
  for (int j = 0; j < n; ++j) {
    place[j] = pw;
    pw *= base;
  }

  Rng rng(seed);
  uint64_t cur = 0;  // all-direct start
  std::vector<int> digits(n, 0);
  std::vector<long long> visits(u.size(), 0);
  long long kept = 0;

  for (long long step = 1; step <= steps; ++step) {
    const int j = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    int alt = static_cast<int>(rng.below(static_cast<uint64_t>(relays)));
    if (alt >= digits[j]) ++alt;
    const uint64_t next = cur - static_cast<uint64_t>(digits[j]) * place[j] +
                          static_cast<uint64_t>(alt) * place[j];
    const double pr = transition_prob(u[cur], u[next], temperature);
    if (rng.uniform() < pr) {
      cur = next;
      digits[j] = alt;
    }
    if (step > burn) {
      ++visits[cur];
      ++kept;
    }
  }

  double tv = 0.0;
  for (size_t s = 0; s < pi.size(); ++s)
    tv += std::abs(static_cast<double>(visits[s]) / static_cast<double>(kept) - pi[s]);
  return 0.5 * tv;
}

MixingBounds mixing_time_bounds(int n_units, int n_relays, double u_hat_max,
                                double u_hat_min, double epsilon, double temperature) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    fail(errc::invalid_argument, "mixing_time_bounds: epsilon must be in (0, 1]");
  if (!(temperature > 0.0))
    fail(errc::invalid_argument, "mixing_time_bounds: temperature must be > 0");
  if (n_units < 1 || n_relays < 1)
    fail(errc::invalid_argument, "mixing_time_bounds: need units and relays");
  if (u_hat_max < u_hat_min)
    fail(errc::invalid_argument, "mixing_time_bounds: max below min");

  const double n = n_units, r = n_relays;
  const double alpha = 1.0 / (n * r);
  const double states = static_cast<double>(state_count(n_units, n_relays));
  const double spread = u_hat_max - u_hat_min;

  MixingBounds b;
  b.lower = std::log(1.0 / epsilon) / (2.0 * alpha * states * r);

  if (n_units >= 2) {
    const double log_arg = (n + 1.0 / r) / (n - 1.0);
    b.threshold_temperature = 2.0 * spread / std::log(log_arg);
    b.condition_verified = temperature >= b.threshold_temperature;
  } else {
    // the threshold rule divides by ln of an undefined ratio; report as
    // unverifiable rather than guessing
    b.threshold_temperature = std::numeric_limits<double>::quiet_NaN();
    b.condition_verified = false;
  }

  const double denom = n + 1.0 / r - (n - 1.0) * std::exp(2.0 * spread / temperature);
  if (denom > 0.0) {
    b.upper = (1.0 / (alpha * r)) * std::exp((2.0 * u_hat_max - u_hat_min) / temperature) *
              std::log(n / epsilon) / denom;
    b.upper_applicable = true;
  } else {
    b.upper = std::numeric_limits<double>::infinity();
    b.upper_applicable = false;
  }
  return b;
}

}  // namespace scf
