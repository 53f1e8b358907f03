#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "optimizer.hpp"
#include "replay.hpp"
#include "semantics.hpp"
#include "throughput.hpp"

namespace scf {

// One strategy scored end to end against a fixed problem.
struct StrategyEval {
  std::string name;
  Assignment phi;
  LinkSchedule schedule;
  FeasibilityReport feasibility;
  EnergyBreakdown energy;
  double theta = 0.0;
  double u = 0.0;
  double u_hat = 0.0;
};

// Everything the planning phases produce, kept for reporting.
struct PlanResult {
  Kinematics kin;
  ThroughputAnalysis analysis;
  double q_max_bits = 0.0;
  WeightedDigraph pool;  // the fixture the payload was selected from
  Problem problem;       // rates + selected payload + weights
  BaselineResult baseline;
  StrategyEval baseline_eval;
  SearchTrace search;
  StrategyEval mmtsa_eval;
  std::vector<std::string> warnings;
  bool infeasible_likely = false;
  double plan_seconds = 0.0;  // wall clock; lands in timing.log only
};

WeightedDigraph load_sr_fixture(const std::string& path);

// budget_spec: "" takes the whole pool, "qmax" budgets by the predicted
// throughput, anything else is a number in Mbit
SemanticRepresentation select_sr(const WeightedDigraph& pool,
                                 const std::string& budget_spec, double q_max_bits);

StrategyEval evaluate_strategy(const std::string& name, const Assignment& phi,
                               const Problem& p);

// predict -> throughput -> payload selection -> baseline -> search
PlanResult plan(const ExperimentConfig& cfg);

// Strategy documents map vehicle id -> unit id list and round-trip exactly.
void write_strategy_doc(const std::string& path, const StrategyEval& ev,
                        const PlanResult& pr);
Assignment load_strategy_doc(const std::string& path, const SemanticRepresentation& sr,
                             const Kinematics& kin);

// strategy_*.json, metrics.csv, search_trace.csv, summary.txt + timing.log
void write_plan_reports(const PlanResult& pr, const std::string& out_dir);

// Replays the searched strategy.  trace_override (a CSV path) wins over the
// config's perturbation spec; otherwise none/gaussian use `seed`.
ExecutionReport replay_plan(const ExperimentConfig& cfg, const PlanResult& pr,
                            uint64_t seed, const std::string& trace_override);
void write_replay_report(const std::string& path, const PlanResult& pr,
                         const ExecutionReport& rep, uint64_t seed,
                         const std::string& mode);

struct SweepRow {
  uint64_t seed = 0;
  size_t delivered = 0;
  size_t assigned = 0;
  double realized_accuracy = 0.0;
  double v2i_j = 0.0;
  double v2v_j = 0.0;
  double completion_s = 0.0;
  double ee_s_per_j = 0.0;
};

// One replay per seed, run on a small thread pool; rows come back in seed
// order regardless of scheduling.
std::vector<SweepRow> sweep(const ExperimentConfig& cfg, const PlanResult& pr,
                            uint64_t seed_lo, uint64_t seed_hi);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

struct OracleResult {
  uint64_t states = 0;
  Assignment best;
  double best_u_hat = 0.0;
  double search_u_hat = 0.0;
  bool search_matches = false;
};

// Exhaustive check of the searched answer; only viable on small instances.
OracleResult run_oracle(const PlanResult& pr);
void write_oracle_report(const std::string& path, const PlanResult& pr,
                         const OracleResult& oracle);

// Directory holding the shipped configs/fixtures.  The build bakes in the
// source tree; SCFSIM_BUNDLE_DIR in the environment overrides it.
std::string bundled_dir();

// cli value > SCFSIM_OUT_DIR > ./scfsim_out
std::string resolve_out_dir(const std::string& cli_value);

std::string format_double(double v);  // fixed %.12g used by all report writers

}  // namespace scf
