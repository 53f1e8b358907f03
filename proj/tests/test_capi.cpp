#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "scfsim/scfsim.h"

#include "config.hpp"
#include "fixture.hpp"
#include "pipeline.hpp"
#include "semantics.hpp"
#include "trace.hpp"

namespace fs = std::filesystem;

namespace {

// owning wrapper so a failing REQUIRE cannot leak the handle
struct Handle {
  scf_experiment* x = nullptr;
  Handle() = default;
  Handle(Handle&& o) noexcept : x(o.x) { o.x = nullptr; }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { scf_experiment_close(x); }
  operator scf_experiment*() const { return x; }
};

Handle open_tiny() {
  Handle h;
  const std::string path = std::string(scf_bundled_dir()) + "/configs/tiny.json";
  REQUIRE(scf_experiment_open(path.c_str(), &h.x) == SCF_OK);
  REQUIRE(h.x != nullptr);
  return h;
}

double metric(scf_experiment* x, const char* name) {
  double v = 0.0;
  REQUIRE(scf_metric(x, name, &v) == SCF_OK);
  return v;
}

std::string last(scf_experiment* x) { return scf_last_error(x); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

size_t line_count(const std::string& text) {
  size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("open failures leave a readable message") {
  scf_experiment* x = reinterpret_cast<scf_experiment*>(0x1);
  CHECK(scf_experiment_open("/no/such/config.json", &x) == SCF_ERR_IO);
  CHECK(x == nullptr);
  CHECK(std::string(scf_last_error(nullptr)).find("cannot open config file") !=
        std::string::npos);

  CHECK(scf_experiment_open(nullptr, &x) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(scf_last_error(nullptr)) == "config path is null");
  CHECK(scf_experiment_open("whatever", nullptr) == SCF_ERR_INVALID_ARGUMENT);

  const std::string dir = testfix::temp_dir("capi_open");
  std::ofstream(dir + "/broken.json") << "{\"t_max_s\":";
  CHECK(scf_experiment_open((dir + "/broken.json").c_str(), &x) == SCF_ERR_PARSE);
  CHECK(x == nullptr);

  scf_experiment_close(nullptr);  // harmless
}

TEST_CASE("the full phase chain on the tiny scenario") {
  Handle h = open_tiny();
  const std::string out = testfix::temp_dir("capi_chain");
  REQUIRE(scf_set_output_dir(h, out.c_str()) == SCF_OK);

  // phases past planning refuse to run early
  CHECK(scf_replay(h, 1) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "scf_plan must run first");
  CHECK(scf_sweep(h, 1, 2) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(scf_oracle(h) == SCF_ERR_INVALID_ARGUMENT);
  double v = 0.0;
  CHECK(scf_metric(h, "q_max_mbit", &v) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "metric 'q_max_mbit' needs scf_plan");

  REQUIRE(scf_plan(h) == SCF_OK);
  for (const char* f : {"strategy_baseline.json", "strategy_mmtsa.json", "metrics.csv",
                        "search_trace.csv", "summary.txt", "timing.log"})
    CHECK(fs::exists(fs::path(out) / f));

  // planning freezes the instance; overrides now bounce
  CHECK(scf_set_seed(h, 3) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "seed override must precede scf_plan");
  CHECK(scf_set_t_max(h, 50.0) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "t_max override must precede scf_plan");

  CHECK(metric(h, "sr_units") == 4.0);
  CHECK(metric(h, "relay_count") == 2.0);
  CHECK(metric(h, "sr_volume_mbit") == 15.0);
  CHECK(metric(h, "warning_count") == 0.0);
  CHECK(metric(h, "infeasible_likely") == 0.0);

  CHECK(scf_metric(h, "replay_accuracy", &v) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "metric 'replay_accuracy' needs scf_replay");
  REQUIRE(scf_replay(h, 5) == SCF_OK);
  CHECK(fs::exists(fs::path(out) / "replay_report.json"));
  CHECK(metric(h, "replay_assigned") == 4.0);
  CHECK(metric(h, "replay_delivered") <= 4.0);
  CHECK(metric(h, "replay_accuracy") <= metric(h, "planned_accuracy"));

  REQUIRE(scf_sweep(h, 1, 3) == SCF_OK);
  const std::string sweep_csv = read_file((fs::path(out) / "sweep.csv").string());
  CHECK(line_count(sweep_csv) == 4);  // header + one row per seed
  CHECK(sweep_csv.rfind("seed,delivered,assigned,", 0) == 0);
  CHECK(scf_sweep(h, 3, 2) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "empty seed range");

  CHECK(scf_metric(h, "oracle_states", &v) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "metric 'oracle_states' needs scf_oracle");
  REQUIRE(scf_oracle(h) == SCF_OK);
  CHECK(fs::exists(fs::path(out) / "oracle.json"));
  CHECK(metric(h, "oracle_states") == 81.0);
  CHECK(metric(h, "oracle_matches") == 1.0);
  CHECK(metric(h, "oracle_best_u_hat") <= metric(h, "mmtsa_u_hat") + 1e-9);

  CHECK(scf_metric(h, "zzz", &v) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(h) == "unknown metric 'zzz'");

  const char* msg = nullptr;
  CHECK(scf_warning(h, 0, &msg) == SCF_ERR_INVALID_ARGUMENT);  // no warnings here
  CHECK(scf_warning(h, -1, &msg) == SCF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("metrics agree with a direct core-library run") {
  const std::string cfg_path = std::string(scf_bundled_dir()) + "/configs/tiny.json";
  const scf::ExperimentConfig cfg = scf::load_config(cfg_path);
  const scf::PlanResult pr = scf::plan(cfg);

  Handle h = open_tiny();
  const std::string out = testfix::temp_dir("capi_core_cmp");
  REQUIRE(scf_set_output_dir(h, out.c_str()) == SCF_OK);
  REQUIRE(scf_plan(h) == SCF_OK);

  // both sides run the same seeded search, so values match exactly
  CHECK(metric(h, "q_max_mbit") == pr.q_max_bits / 1e6);
  CHECK(metric(h, "rate_v2i_mbps") == pr.problem.rates.v2i_bps / 1e6);
  CHECK(metric(h, "rate_v2v_mbps") == pr.problem.rates.v2v_bps / 1e6);
  CHECK(metric(h, "target_dwell_s") == pr.kin.target_dwell_s);
  CHECK(metric(h, "target_dwell_s") == 30.0);
  CHECK(metric(h, "planned_accuracy") == scf::sr_accuracy(pr.problem.sr));
  CHECK(metric(h, "search_temperature") == pr.search.temperature);
  CHECK(metric(h, "search_accepted") ==
        static_cast<double>(pr.search.accepted_count));

  CHECK(metric(h, "baseline_u") == pr.baseline_eval.u);
  CHECK(metric(h, "baseline_u_hat") == pr.baseline_eval.u_hat);
  CHECK(metric(h, "baseline_theta") == pr.baseline_eval.theta);
  CHECK(metric(h, "baseline_v2i_j") == pr.baseline_eval.energy.v2i_j);
  CHECK(metric(h, "baseline_v2v_j") == pr.baseline_eval.energy.v2v_j);
  CHECK(metric(h, "baseline_feasible") ==
        (pr.baseline_eval.feasibility.ok ? 1.0 : 0.0));

  CHECK(metric(h, "mmtsa_u") == pr.mmtsa_eval.u);
  CHECK(metric(h, "mmtsa_u_hat") == pr.mmtsa_eval.u_hat);
  CHECK(metric(h, "mmtsa_theta") == pr.mmtsa_eval.theta);
  CHECK(metric(h, "mmtsa_feasible") == 1.0);
  CHECK(metric(h, "mmtsa_ee") ==
        scf::semantic_energy_efficiency(scf::sr_accuracy(pr.problem.sr),
                                        pr.mmtsa_eval.energy.total()));
}

TEST_CASE("deadline override reshapes the plan") {
  Handle slack = open_tiny();
  Handle tight = open_tiny();
  const std::string out_a = testfix::temp_dir("capi_tmax_a");
  const std::string out_b = testfix::temp_dir("capi_tmax_b");
  REQUIRE(scf_set_output_dir(slack, out_a.c_str()) == SCF_OK);
  REQUIRE(scf_set_output_dir(tight, out_b.c_str()) == SCF_OK);

  CHECK(scf_set_t_max(tight, 0.0) == SCF_ERR_INVALID_ARGUMENT);
  CHECK(last(tight) == "t_max must be > 0");
  REQUIRE(scf_set_t_max(tight, 30.0) == SCF_OK);
  REQUIRE(scf_set_seed(tight, 2) == SCF_OK);  // pre-plan overrides are fine

  REQUIRE(scf_plan(slack) == SCF_OK);
  REQUIRE(scf_plan(tight) == SCF_OK);

  // 30 s cuts the relay windows off, so less data can arrive
  CHECK(metric(tight, "q_max_mbit") < metric(slack, "q_max_mbit"));
}

TEST_CASE("replay honors a recorded trace override") {
  Handle h = open_tiny();
  const std::string out = testfix::temp_dir("capi_trace");
  REQUIRE(scf_set_output_dir(h, out.c_str()) == SCF_OK);
  REQUIRE(scf_plan(h) == SCF_OK);

  const scf::RoadGeometry geo = testfix::reference_kinematics().road;
  const std::vector<scf::VehicleState> predicted = {
      {0, 200.0, 10.0}, {1, 300.0, 12.0}, {2, 100.0, 15.0}};
  scf::write_trace(out + "/actual.csv", geo, predicted, 0.5, 61.0);

  REQUIRE(scf_set_replay_trace(h, (out + "/actual.csv").c_str()) == SCF_OK);
  REQUIRE(scf_replay(h, 9) == SCF_OK);

  // the trace is the predicted motion, so the whole payload lands
  CHECK(metric(h, "replay_delivered") == 4.0);
  CHECK(metric(h, "replay_accuracy") == metric(h, "planned_accuracy"));
  CHECK(read_file(out + "/replay_report.json").find("\"mode\": \"trace\"") !=
        std::string::npos);

  // a trace that stops too early is rejected with the validation status
  scf::write_trace(out + "/short.csv", geo, predicted, 0.5, 30.0);
  REQUIRE(scf_set_replay_trace(h, (out + "/short.csv").c_str()) == SCF_OK);
  CHECK(scf_replay(h, 9) == SCF_ERR_VALIDATION);
  CHECK(last(h).find("shorter than the replay horizon") != std::string::npos);

  // as is one that lacks a vehicle the plan depends on
  scf::write_trace(out + "/solo.csv", geo, {{0, 200.0, 10.0}}, 0.5, 61.0);
  REQUIRE(scf_set_replay_trace(h, (out + "/solo.csv").c_str()) == SCF_OK);
  CHECK(scf_replay(h, 9) == SCF_ERR_VALIDATION);
  CHECK(last(h) == "replay trace lacks vehicle 1");
}

TEST_CASE("status names, bundle location and version") {
  CHECK(std::string(scf_status_name(SCF_OK)) == "ok");
  CHECK(std::string(scf_status_name(SCF_ERR_INVALID_ARGUMENT)) == "invalid-argument");
  CHECK(std::string(scf_status_name(SCF_ERR_PARSE)) == "parse-error");
  CHECK(std::string(scf_status_name(SCF_ERR_VALIDATION)) == "validation-error");
  CHECK(std::string(scf_status_name(SCF_ERR_IO)) == "io-error");
  CHECK(std::string(scf_status_name(SCF_ERR_STATE_SPACE)) == "state-space-too-large");
  CHECK(std::string(scf_status_name(SCF_ERR_INTERNAL)) == "internal-error");
  CHECK(std::string(scf_status_name(static_cast<scf_status>(99))) == "unknown");

  CHECK(std::string(scf_bundled_dir()) == scf::bundled_dir());
  CHECK(fs::exists(fs::path(scf_bundled_dir()) / "data" / "tiny_sr.json"));
  CHECK(std::string(scf_version()) == "0.1.0");
}
