#include "scfsim/scfsim.h"

#include <cstring>
#include <filesystem>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "pipeline.hpp"

struct scf_experiment {
  scf::ExperimentConfig cfg;
  std::string out_dir;  // empty until resolved at first use
  std::string trace_override;
  bool planned = false;
  scf::PlanResult pr;
  bool replayed = false;
  scf::ExecutionReport rep;
  bool swept = false;
  bool oracled = false;
  scf::OracleResult oracle;
  mutable std::string last_error;
};

namespace {

thread_local std::string g_last_error;

scf_status status_of(const scf::error& e) {
  switch (e.code()) {
    case scf::errc::ok: return SCF_OK;
    case scf::errc::invalid_argument: return SCF_ERR_INVALID_ARGUMENT;
    case scf::errc::parse: return SCF_ERR_PARSE;
    case scf::errc::validation: return SCF_ERR_VALIDATION;
    case scf::errc::io: return SCF_ERR_IO;
    case scf::errc::state_space: return SCF_ERR_STATE_SPACE;
    case scf::errc::internal: return SCF_ERR_INTERNAL;
  }
  return SCF_ERR_INTERNAL;
}

void record(scf_experiment* x, const std::string& msg) {
  if (x)
    x->last_error = msg;
  else
    g_last_error = msg;
}

template <typename Fn>
scf_status guarded(scf_experiment* x, Fn&& fn) {
  try {
    return fn();
  } catch (const scf::error& e) {
    record(x, e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    record(x, e.what());
    return SCF_ERR_INTERNAL;
  } catch (...) {
    record(x, "unknown failure");
    return SCF_ERR_INTERNAL;
  }
}

std::string out_dir_of(scf_experiment* x) { return scf::resolve_out_dir(x->out_dir); }

scf_status need_plan(scf_experiment* x) {
  if (x->planned) return SCF_OK;
  record(x, "scf_plan must run first");
  return SCF_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

scf_status scf_experiment_open(const char* config_path, scf_experiment** out) {
  if (!out) return SCF_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  if (!config_path) {
    g_last_error = "config path is null";
    return SCF_ERR_INVALID_ARGUMENT;
  }
  return guarded(nullptr, [&] {
    auto x = new scf_experiment();
    try {
      x->cfg = scf::load_config(config_path);
    } catch (...) {
      delete x;
      throw;
    }
    *out = x;
    return SCF_OK;
  });
}

void scf_experiment_close(scf_experiment* x) { delete x; }

scf_status scf_set_output_dir(scf_experiment* x, const char* dir) {
  if (!x || !dir) return SCF_ERR_INVALID_ARGUMENT;
  x->out_dir = dir;
  return SCF_OK;
}

scf_status scf_set_seed(scf_experiment* x, uint64_t seed) {
  if (!x) return SCF_ERR_INVALID_ARGUMENT;
  if (x->planned) {
    record(x, "seed override must precede scf_plan");
    return SCF_ERR_INVALID_ARGUMENT;
  }
  x->cfg.search.seed = seed;
  return SCF_OK;
}

scf_status scf_set_t_max(scf_experiment* x, double t_max_s) {
  if (!x) return SCF_ERR_INVALID_ARGUMENT;
  if (!(t_max_s > 0.0)) {
    record(x, "t_max must be > 0");
    return SCF_ERR_INVALID_ARGUMENT;
  }
  if (x->planned) {
    record(x, "t_max override must precede scf_plan");
    return SCF_ERR_INVALID_ARGUMENT;
  }
  x->cfg.t_max_s = t_max_s;
  return SCF_OK;
}

scf_status scf_set_replay_trace(scf_experiment* x, const char* csv_path) {
  if (!x || !csv_path) return SCF_ERR_INVALID_ARGUMENT;
  x->trace_override = csv_path;
  return SCF_OK;
}

scf_status scf_plan(scf_experiment* x) {
  if (!x) return SCF_ERR_INVALID_ARGUMENT;
  return guarded(x, [&] {
    x->pr = scf::plan(x->cfg);
    scf::write_plan_reports(x->pr, out_dir_of(x));
    x->planned = true;
    return SCF_OK;
  });
}

scf_status scf_replay(scf_experiment* x, uint64_t seed) {
  if (!x) return SCF_ERR_INVALID_ARGUMENT;
  if (scf_status s = need_plan(x); s != SCF_OK) return s;
  return guarded(x, [&] {
    x->rep = scf::replay_plan(x->cfg, x->pr, seed, x->trace_override);
    std::string mode = "none";
    if (!x->trace_override.empty() ||
        x->cfg.perturbation.mode == scf::PerturbationSpec::Mode::trace)
      mode = "trace";
    else if (x->cfg.perturbation.mode == scf::PerturbationSpec::Mode::gaussian)
      mode = "gaussian";
    const auto out = std::filesystem::path(out_dir_of(x));
    scf::write_replay_report((out / "replay_report.json").string(), x->pr, x->rep, seed,
                             mode);
    x->replayed = true;
    return SCF_OK;
  });
}

scf_status scf_sweep(scf_experiment* x, uint64_t seed_lo, uint64_t seed_hi) {
  if (!x) return SCF_ERR_INVALID_ARGUMENT;
  if (scf_status s = need_plan(x); s != SCF_OK) return s;
  return guarded(x, [&] {
    const auto rows = scf::sweep(x->cfg, x->pr, seed_lo, seed_hi);
    const auto out = std::filesystem::path(out_dir_of(x));
    scf::write_sweep_csv((out / "sweep.csv").string(), rows);
    x->swept = true;
    return SCF_OK;
  });
}

scf_status scf_oracle(scf_experiment* x) {
  if (!x) return SCF_ERR_INVALID_ARGUMENT;
  if (scf_status s = need_plan(x); s != SCF_OK) return s;
  return guarded(x, [&] {
    x->oracle = scf::run_oracle(x->pr);
    const auto out = std::filesystem::path(out_dir_of(x));
    scf::write_oracle_report((out / "oracle.json").string(), x->pr, x->oracle);
    x->oracled = true;
    return SCF_OK;
  });
}

scf_status scf_metric(const scf_experiment* x, const char* name, double* out) {
  if (!x || !name || !out) return SCF_ERR_INVALID_ARGUMENT;
  auto* xm = const_cast<scf_experiment*>(x);
  const std::string key = name;

  if (!x->planned) {
    record(xm, "metric '" + key + "' needs scf_plan");
    return SCF_ERR_INVALID_ARGUMENT;
  }
  auto plan_metric = [&](double v) {
    *out = v;
    return true;
  };

  const scf::PlanResult& pr = x->pr;
  auto eval_metric = [&](const scf::StrategyEval& ev, const std::string& field,
                         double* value) {
    if (field == "u") *value = ev.u;
    else if (field == "u_hat") *value = ev.u_hat;
    else if (field == "theta") *value = ev.theta;
    else if (field == "v2i_j") *value = ev.energy.v2i_j;
    else if (field == "v2v_j") *value = ev.energy.v2v_j;
    else if (field == "feasible") *value = ev.feasibility.ok ? 1.0 : 0.0;
    else if (field == "ee")
      *value = scf::semantic_energy_efficiency(scf::sr_accuracy(pr.problem.sr),
                                               ev.energy.total());
    else return false;
    return true;
  };

  if (key == "q_max_mbit") return plan_metric(pr.q_max_bits / 1e6) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "rate_v2i_mbps") return plan_metric(pr.problem.rates.v2i_bps / 1e6) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "rate_v2v_mbps") return plan_metric(pr.problem.rates.v2v_bps / 1e6) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "target_dwell_s") return plan_metric(pr.kin.target_dwell_s) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "relay_count") return plan_metric(static_cast<double>(pr.kin.relays.size())) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "sr_units") return plan_metric(static_cast<double>(pr.problem.sr.units.size())) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "sr_volume_mbit") return plan_metric(scf::sr_volume(pr.problem.sr) / 1e6) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "planned_accuracy") return plan_metric(scf::sr_accuracy(pr.problem.sr)) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "search_temperature") return plan_metric(pr.search.temperature) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "search_accepted") return plan_metric(static_cast<double>(pr.search.accepted_count)) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "warning_count") return plan_metric(static_cast<double>(pr.warnings.size())) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;
  if (key == "infeasible_likely") return plan_metric(pr.infeasible_likely ? 1.0 : 0.0) ? SCF_OK : SCF_ERR_INVALID_ARGUMENT;

  if (key.rfind("baseline_", 0) == 0) {
    if (eval_metric(pr.baseline_eval, key.substr(9), out)) return SCF_OK;
  } else if (key.rfind("mmtsa_", 0) == 0) {
    if (eval_metric(pr.mmtsa_eval, key.substr(6), out)) return SCF_OK;
  } else if (key.rfind("replay_", 0) == 0) {
    if (!x->replayed) {
      record(xm, "metric '" + key + "' needs scf_replay");
      return SCF_ERR_INVALID_ARGUMENT;
    }
    const std::string field = key.substr(7);
    if (field == "delivered") { *out = static_cast<double>(x->rep.delivered_units.size()); return SCF_OK; }
    if (field == "assigned") { *out = static_cast<double>(pr.problem.sr.units.size()); return SCF_OK; }
    if (field == "accuracy") { *out = x->rep.realized_accuracy; return SCF_OK; }
    if (field == "v2i_j") { *out = x->rep.v2i_energy_j; return SCF_OK; }
    if (field == "v2v_j") { *out = x->rep.v2v_energy_j; return SCF_OK; }
    if (field == "completion_s") { *out = x->rep.completion_s; return SCF_OK; }
    if (field == "ee") { *out = x->rep.ee_s_per_j; return SCF_OK; }
  } else if (key.rfind("oracle_", 0) == 0) {
    if (!x->oracled) {
      record(xm, "metric '" + key + "' needs scf_oracle");
      return SCF_ERR_INVALID_ARGUMENT;
    }
    const std::string field = key.substr(7);
    if (field == "states") { *out = static_cast<double>(x->oracle.states); return SCF_OK; }
    if (field == "best_u_hat") { *out = x->oracle.best_u_hat; return SCF_OK; }
    if (field == "matches") { *out = x->oracle.search_matches ? 1.0 : 0.0; return SCF_OK; }
  }

  record(xm, "unknown metric '" + key + "'");
  return SCF_ERR_INVALID_ARGUMENT;
}

scf_status scf_warning(const scf_experiment* x, int index, const char** out) {
  if (!x || !out) return SCF_ERR_INVALID_ARGUMENT;
  if (!x->planned || index < 0 ||
      index >= static_cast<int>(x->pr.warnings.size()))
    return SCF_ERR_INVALID_ARGUMENT;
  *out = x->pr.warnings[static_cast<size_t>(index)].c_str();
  return SCF_OK;
}

const char* scf_last_error(const scf_experiment* x) {
  return x ? x->last_error.c_str() : g_last_error.c_str();
}

const char* scf_status_name(scf_status s) {
  switch (s) {
    case SCF_OK: return "ok";
    case SCF_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SCF_ERR_PARSE: return "parse-error";
    case SCF_ERR_VALIDATION: return "validation-error";
    case SCF_ERR_IO: return "io-error";
    case SCF_ERR_STATE_SPACE: return "state-space-too-large";
    case SCF_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* scf_bundled_dir(void) {
  static thread_local std::string dir;
  dir = scf::bundled_dir();
  return dir.c_str();
}

const char* scf_version(void) { return "0.1.0"; }

}  // extern "C"
