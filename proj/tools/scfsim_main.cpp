// scfsim command line: plan / replay / sweep / oracle / repro-paper over the
// C interface of the core library.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "scfsim/scfsim.h"

namespace {

int fail_with(scf_experiment* x, scf_status s, const char* phase) {
  std::fprintf(stderr, "scfsim: %s failed (%s): %s\n", phase, scf_status_name(s),
               scf_last_error(x));
  scf_experiment_close(x);
  return 1;
}

double metric(scf_experiment* x, const char* name) {
  double v = 0.0;
  scf_metric(x, name, &v);
  return v;
}

void print_warnings(scf_experiment* x) {
  const int n = static_cast<int>(metric(x, "warning_count"));
  for (int i = 0; i < n; ++i) {
    const char* w = nullptr;
    if (scf_warning(x, i, &w) == SCF_OK)
      std::fprintf(stderr, "scfsim: warning: %s\n", w);
  }
}

scf_experiment* open_with(const std::string& config, const std::string& out_dir,
                          scf_status* status) {
  scf_experiment* x = nullptr;
  *status = scf_experiment_open(config.c_str(), &x);
  if (*status != SCF_OK) return nullptr;
  if (!out_dir.empty()) scf_set_output_dir(x, out_dir.c_str());
  return x;
}

void print_plan_headline(scf_experiment* x) {
  std::printf("achievable throughput: %.6f Mbit (target dwell %.6g s)\n",
              metric(x, "q_max_mbit"), metric(x, "target_dwell_s"));
  std::printf("rates: v2i %.6f Mbit/s, v2v %.6f Mbit/s; relays planned: %d\n",
              metric(x, "rate_v2i_mbps"), metric(x, "rate_v2v_mbps"),
              static_cast<int>(metric(x, "relay_count")));
  std::printf("payload: %d units, %.6f Mbit, accuracy %.4f\n",
              static_cast<int>(metric(x, "sr_units")), metric(x, "sr_volume_mbit"),
              metric(x, "planned_accuracy"));
  std::printf("baseline: u_hat %.6f (%s)\n", metric(x, "baseline_u_hat"),
              metric(x, "baseline_feasible") > 0.0 ? "feasible" : "infeasible");
  std::printf("searched: u_hat %.6f (%s), energy %.6f J v2i + %.6f J v2v\n",
              metric(x, "mmtsa_u_hat"),
              metric(x, "mmtsa_feasible") > 0.0 ? "feasible" : "infeasible",
              metric(x, "mmtsa_v2i_j"), metric(x, "mmtsa_v2v_j"));
}

int cmd_plan(const std::string& config, const std::string& out_dir, bool has_seed,
             uint64_t seed, double t_max) {
  scf_status s;
  scf_experiment* x = open_with(config, out_dir, &s);
  if (!x) return fail_with(nullptr, s, "open");
  if (has_seed) scf_set_seed(x, seed);
  if (t_max > 0.0 && (s = scf_set_t_max(x, t_max)) != SCF_OK)
    return fail_with(x, s, "t-max override");
  if ((s = scf_plan(x)) != SCF_OK) return fail_with(x, s, "plan");
  print_plan_headline(x);
  print_warnings(x);
  scf_experiment_close(x);
  return 0;
}

int cmd_replay(const std::string& config, const std::string& out_dir, uint64_t seed,
               const std::string& trace) {
  scf_status s;
  scf_experiment* x = open_with(config, out_dir, &s);
  if (!x) return fail_with(nullptr, s, "open");
  if (!trace.empty() && (s = scf_set_replay_trace(x, trace.c_str())) != SCF_OK)
    return fail_with(x, s, "trace override");
  if ((s = scf_plan(x)) != SCF_OK) return fail_with(x, s, "plan");
  if ((s = scf_replay(x, seed)) != SCF_OK) return fail_with(x, s, "replay");
  std::printf("replay: delivered %d/%d units, accuracy %.4f of %.4f planned\n",
              static_cast<int>(metric(x, "replay_delivered")),
              static_cast<int>(metric(x, "replay_assigned")),
              metric(x, "replay_accuracy"), metric(x, "planned_accuracy"));
  std::printf("replay: energy %.6f J v2i + %.6f J v2v, completion %.3f s\n",
              metric(x, "replay_v2i_j"), metric(x, "replay_v2v_j"),
              metric(x, "replay_completion_s"));
  print_warnings(x);
  scf_experiment_close(x);
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& out_dir,
              const std::string& seeds) {
  const auto sep = seeds.find("..");
  uint64_t lo = 0, hi = 0;
  try {
    if (sep == std::string::npos) throw std::invalid_argument(seeds);
    lo = std::stoull(seeds.substr(0, sep));
    hi = std::stoull(seeds.substr(sep + 2));
  } catch (...) {
    std::fprintf(stderr, "scfsim: --seeds wants A..B (e.g. 1..50), got '%s'\n",
                 seeds.c_str());
    return 1;
  }
  scf_status s;
  scf_experiment* x = open_with(config, out_dir, &s);
  if (!x) return fail_with(nullptr, s, "open");
  if ((s = scf_plan(x)) != SCF_OK) return fail_with(x, s, "plan");
  if ((s = scf_sweep(x, lo, hi)) != SCF_OK) return fail_with(x, s, "sweep");
  std::printf("sweep: %llu replays written to sweep.csv\n",
              static_cast<unsigned long long>(hi - lo + 1));
  scf_experiment_close(x);
  return 0;
}

int cmd_oracle(const std::string& config, const std::string& out_dir) {
  scf_status s;
  scf_experiment* x = open_with(config, out_dir, &s);
  if (!x) return fail_with(nullptr, s, "open");
  if ((s = scf_plan(x)) != SCF_OK) return fail_with(x, s, "plan");
  if ((s = scf_oracle(x)) != SCF_OK) return fail_with(x, s, "oracle");
  std::printf("oracle: %llu states, optimum u_hat %.9f, searched u_hat %.9f -> %s\n",
              static_cast<unsigned long long>(metric(x, "oracle_states")),
              metric(x, "oracle_best_u_hat"), metric(x, "mmtsa_u_hat"),
              metric(x, "oracle_matches") > 0.0 ? "match" : "MISMATCH");
  scf_experiment_close(x);
  return 0;
}

int cmd_repro(const std::string& out_dir) {
  const std::string config = std::string(scf_bundled_dir()) + "/configs/reference.json";
  const char* env_dir = std::getenv("SCFSIM_OUT_DIR");
  const std::string base =
      !out_dir.empty() ? out_dir : (env_dir && *env_dir ? env_dir : "scfsim_out");
  const double deadlines[] = {40.0, 50.0, 60.0};
  const double targets_mbit[] = {186.6, 225.6, 264.6};  // reference values, +-0.5%
  for (int i = 0; i < 3; ++i) {
    const double t = deadlines[i];
    scf_status s;
    const std::string sub = base + "/t" + std::to_string(static_cast<int>(t));
    scf_experiment* x = open_with(config, sub, &s);
    if (!x) return fail_with(nullptr, s, "open");
    if ((s = scf_set_t_max(x, t)) != SCF_OK) return fail_with(x, s, "t-max override");
    if ((s = scf_plan(x)) != SCF_OK) return fail_with(x, s, "plan");
    const double q = metric(x, "q_max_mbit");
    std::printf("deadline %2.0f s: achievable %.6f Mbit (reference %.1f, %+.2f%%), "
                "baseline u_hat %.6f, searched u_hat %.6f (%s)\n",
                t, q, targets_mbit[i], 100.0 * (q - targets_mbit[i]) / targets_mbit[i],
                metric(x, "baseline_u_hat"), metric(x, "mmtsa_u_hat"),
                metric(x, "mmtsa_feasible") > 0.0 ? "feasible" : "infeasible");
    scf_experiment_close(x);
  }
  std::printf("reports under %s/t{40,50,60}\n", base.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"store-carry-forward cooperative transmission planner"};
  app.require_subcommand(1);

  std::string config, out_dir, trace, seeds = "1..50";
  uint64_t seed = 1;
  double t_max = 0.0;
  bool has_seed = false;

  auto add_common = [&](CLI::App* sub, bool with_config = true) {
    if (with_config)
      sub->add_option("config", config, "experiment config file")->required();
    sub->add_option("--out", out_dir,
                    "output directory (default: $SCFSIM_OUT_DIR or ./scfsim_out)");
  };

  CLI::App* plan = app.add_subcommand("plan", "predict, budget and search a strategy");
  add_common(plan);
  plan->add_option("--seed", seed, "search seed override")->each([&](const std::string&) {
    has_seed = true;
  });
  plan->add_option("--t-max", t_max, "deadline override in seconds");

  CLI::App* replay = app.add_subcommand("replay", "execute the plan against actual motion");
  add_common(replay);
  auto* seed_opt = replay->add_option("--seed", seed, "perturbation seed (default 1)");
  auto* trace_opt = replay->add_option("--trace", trace, "replay against this trace CSV");
  seed_opt->excludes(trace_opt);

  CLI::App* sweep = app.add_subcommand("sweep", "replay a seed range in parallel");
  add_common(sweep);
  sweep->add_option("--seeds", seeds, "inclusive seed range A..B")->required();

  CLI::App* oracle = app.add_subcommand("oracle",
                                        "exhaustive optimum check (small instances)");
  add_common(oracle);

  CLI::App* repro = app.add_subcommand("repro-paper",
                                       "run the bundled reference scenario");
  add_common(repro, /*with_config=*/false);

  CLI11_PARSE(app, argc, argv);

  if (plan->parsed()) return cmd_plan(config, out_dir, has_seed, seed, t_max);
  if (replay->parsed()) return cmd_replay(config, out_dir, seed, trace);
  if (sweep->parsed()) return cmd_sweep(config, out_dir, seeds);
  if (oracle->parsed()) return cmd_oracle(config, out_dir);
  if (repro->parsed()) return cmd_repro(out_dir);
  return 1;
}
