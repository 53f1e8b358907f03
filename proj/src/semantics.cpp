#include "semantics.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "errors.hpp"

namespace scf {

void validate(const WeightedDigraph& g) {
  std::unordered_set<std::string> ids;
  for (const auto& u : g.units) {
    if (u.id.empty()) fail(errc::validation, "unit with empty id");
    if (!ids.insert(u.id).second) fail(errc::validation, "duplicate unit id '" + u.id + "'");
    if (u.alpha < 0.0) fail(errc::validation, "unit '" + u.id + "': importance must be >= 0");
    if (!(u.beta_bits > 0.0)) fail(errc::validation, "unit '" + u.id + "': size must be > 0");
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : g.edges) {
    if (!ids.count(e.head)) fail(errc::validation, "edge head '" + e.head + "' unknown");
    if (!ids.count(e.tail)) fail(errc::validation, "edge tail '" + e.tail + "' unknown");
    if (!ids.count(e.unit)) fail(errc::validation, "edge payload unit '" + e.unit + "' unknown");
    if (!seen.insert({e.head, e.tail}).second)
      fail(errc::validation, "duplicate edge " + e.head + " -> " + e.tail);
  }
}

SemanticRepresentation extract_sr(const WeightedDigraph& g, double budget_bits) {
  if (!(budget_bits > 0.0)) fail(errc::invalid_argument, "extract_sr: budget must be > 0");
  validate(g);

  std::vector<size_t> order(g.units.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& ua = g.units[a];
    const auto& ub = g.units[b];
    if (ua.alpha != ub.alpha) return ua.alpha > ub.alpha;
    if (ua.beta_bits != ub.beta_bits) return ua.beta_bits < ub.beta_bits;
    return ua.id < ub.id;
  });

  std::vector<bool> take(g.units.size(), false);
  double used = 0.0;
  for (size_t idx : order) {
    const double b = g.units[idx].beta_bits;
    if (used + b <= budget_bits) {
      take[idx] = true;
      used += b;
    }
    // skip-and-continue: a unit that does not fit never blocks smaller ones
  }

  SemanticRepresentation sr;
  sr.name = g.name;
  for (size_t i = 0; i < g.units.size(); ++i)  // pool order, not pick order
    if (take[i]) sr.units.push_back(g.units[i]);
  if (sr.units.empty())
    fail(errc::validation, "extract_sr: no unit fits within the budget");
  return sr;
}

double sr_volume(const SemanticRepresentation& sr) {
  double v = 0.0;
  for (const auto& u : sr.units) v += u.beta_bits;
  return v;
}

double sr_accuracy(const SemanticRepresentation& sr) {
  double a = 0.0;
  for (const auto& u : sr.units) a += u.alpha;
  return a;
}

double semantic_reliability(const std::vector<int>& rows, const SemanticRepresentation& sr,
                            double theta_t, double theta_r) {
  if (rows.size() != sr.units.size())
    fail(errc::invalid_argument, "semantic_reliability: assignment/unit count mismatch");
  double direct = 0.0, relayed = 0.0;
  for (size_t j = 0; j < rows.size(); ++j) {
    if (rows[j] < 0) fail(errc::invalid_argument, "semantic_reliability: negative row");
    (rows[j] == 0 ? direct : relayed) += sr.units[j].alpha;
  }
  return theta_t * direct + theta_r * relayed;
}

double semantic_energy_efficiency(double delivered_accuracy, double total_energy_j) {
  if (!(total_energy_j > 0.0))
    fail(errc::invalid_argument, "semantic_energy_efficiency: energy must be > 0");
  return delivered_accuracy / total_energy_j;
}

int unit_index(const SemanticRepresentation& sr, const std::string& id) {
  for (size_t i = 0; i < sr.units.size(); ++i)
    if (sr.units[i].id == id) return static_cast<int>(i);
  return -1;
}

}  // namespace scf
