#pragma once

#include <string>
#include <vector>

namespace scf {

// Indivisible unit of transmittable knowledge: an embedded graph triple with
// an importance score and a payload size.  Never split across links.
struct SemanticUnit {
  std::string id;
  std::string label;
  double alpha = 0.0;  // importance, >= 0
  double beta_bits = 0.0;  // payload size, > 0
};

struct WdgEdge {
  std::string head;
  std::string tail;
  std::string unit;  // id of the unit this edge carries
};

// Knowledge container: units as vertices, directed edges carrying unit
// payloads.  The structure is validated and kept for reporting; selection
// below works on the unit pool alone.
struct WeightedDigraph {
  std::vector<SemanticUnit> units;
  std::vector<WdgEdge> edges;
  std::string name;
};

// The selected transmission payload: an ordered unit list (stable order =
// pool order, which also fixes assignment-matrix column indexing).
struct SemanticRepresentation {
  std::vector<SemanticUnit> units;
  std::string name;
};

void validate(const WeightedDigraph& g);

// Greedy budgeted selection: sort by importance descending (ties: smaller
// payload first, then id), take whatever still fits, keep scanning past
// misfits.  Errors when nothing fits.
SemanticRepresentation extract_sr(const WeightedDigraph& g, double budget_bits);

double sr_volume(const SemanticRepresentation& sr);    // total bits
double sr_accuracy(const SemanticRepresentation& sr);  // total importance

// Reliability score of an assignment: direct-link units weigh theta_t,
// relayed units theta_r.  `rows` maps unit index -> carrying row (0=direct).
double semantic_reliability(const std::vector<int>& rows, const SemanticRepresentation& sr,
                            double theta_t, double theta_r);

// delivered importance per joule
double semantic_energy_efficiency(double delivered_accuracy, double total_energy_j);

int unit_index(const SemanticRepresentation& sr, const std::string& id);  // -1 if absent

}  // namespace scf
