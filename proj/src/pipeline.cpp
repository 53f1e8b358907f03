#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "errors.hpp"
#include "trace.hpp"

namespace scf {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string bundled_dir() {
  if (const char* env = std::getenv("SCFSIM_BUNDLE_DIR")) return env;
  return SCFSIM_BUNDLE_DIR;
}

std::string resolve_out_dir(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("SCFSIM_OUT_DIR")) return env;
  return "scfsim_out";
}

namespace {

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(errc::io, "write to '" + path + "' failed");
}

void append_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) fail(errc::io, "cannot append to '" + path + "'");
  out << content;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(errc::io, "cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

WeightedDigraph load_sr_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open sr fixture '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse, "sr fixture '" + path + "': " + e.what());
  }
  WeightedDigraph g;
  try {
    g.name = doc.value("name", fs::path(path).stem().string());
    if (!doc.contains("units") || !doc["units"].is_array())
      fail(errc::validation, "sr fixture '" + path + "' lacks a units array");
    for (const auto& u : doc["units"]) {
      SemanticUnit su;
      su.id = u.at("id").get<std::string>();
      su.label = u.value("label", su.id);
      su.alpha = u.at("alpha").get<double>();
      su.beta_bits = u.at("beta_mbit").get<double>() * 1e6;
      g.units.push_back(std::move(su));
    }
    for (const auto& e : doc.value("edges", nlohmann::json::array())) {
      g.edges.push_back({e.at("head").get<std::string>(), e.at("tail").get<std::string>(),
                         e.at("unit").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse, "sr fixture '" + path + "': " + e.what());
  }
  validate(g);
  return g;
}

SemanticRepresentation select_sr(const WeightedDigraph& pool,
                                 const std::string& budget_spec, double q_max_bits) {
  if (budget_spec.empty()) {
    SemanticRepresentation sr;
    sr.units = pool.units;
    sr.name = pool.name;
    return sr;
  }
  double budget_bits = 0.0;
  if (budget_spec == "qmax") {
    budget_bits = q_max_bits;
  } else {
    try {
      size_t used = 0;
      budget_bits = std::stod(budget_spec, &used) * 1e6;
      if (used != budget_spec.size()) throw std::invalid_argument(budget_spec);
    } catch (...) {
      fail(errc::parse, "sr budget '" + budget_spec + "' is neither empty, 'qmax' nor a Mbit number");
    }
  }
  return extract_sr(pool, budget_bits);
}

StrategyEval evaluate_strategy(const std::string& name, const Assignment& phi,
                               const Problem& p) {
  StrategyEval ev;
  ev.name = name;
  ev.phi = phi;
  ev.schedule = derive_schedule(phi, p.sr, p.kin, p.rates);
  ev.feasibility = check_feasibility(phi, ev.schedule, p.kin, p.t_max_s);
  ev.energy = total_energy(phi, ev.schedule, p);
  ev.theta = semantic_reliability(phi.row_of, p.sr, p.weights.theta_t, p.weights.theta_r);
  ev.u = objective_U(phi, ev.schedule, p);
  ev.u_hat = penalized_U_hat(phi, p);
  return ev;
}

PlanResult plan(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult pr;

  std::vector<VehicleState> vehicles;
  if (!cfg.vehicles.empty()) {
    vehicles = cfg.vehicles;
  } else {
    MobilityTrace tr = load_trace(cfg.trace_path);
    vehicles = planner_view(tr, cfg.road);
  }
  pr.kin = predict(cfg.road, vehicles[0],
                   {vehicles.begin() + 1, vehicles.end()}, &pr.warnings);

  const Rates rates{link_rate(cfg.channel.v2i.bandwidth_hz, cfg.channel.v2i.snr_threshold),
                    link_rate(cfg.channel.v2v.bandwidth_hz, cfg.channel.v2v.snr_threshold)};
  pr.analysis = cumulative_links(pr.kin, rates);
  pr.q_max_bits = achievable_throughput(pr.analysis, cfg.t_max_s);

  pr.pool = load_sr_fixture(cfg.sr_fixture_path);
  SemanticRepresentation sr = select_sr(pr.pool, cfg.sr_budget, pr.q_max_bits);
  if (sr_volume(sr) > pr.q_max_bits) {
    pr.infeasible_likely = true;
    pr.warnings.push_back("payload volume " + format_double(sr_volume(sr) / 1e6) +
                          " Mbit exceeds the achievable " +
                          format_double(pr.q_max_bits / 1e6) +
                          " Mbit; the plan is likely infeasible");
  }

  pr.problem = make_problem(pr.kin, cfg.channel, std::move(sr), cfg.kappa1, cfg.kappa2,
                            cfg.theta_t, cfg.theta_r, cfg.t_max_s);

  pr.baseline = baseline_assign(pr.problem.sr, pr.kin, pr.problem.rates, cfg.t_max_s);
  if (!pr.baseline.cascade_ok)
    pr.warnings.push_back(
        "greedy cascade ran out of relay capacity; the baseline start is infeasible");
  pr.baseline_eval = evaluate_strategy("baseline", pr.baseline.phi, pr.problem);

  pr.search = mmtsa_solve(pr.problem, cfg.search);
  pr.mmtsa_eval = evaluate_strategy("mmtsa", pr.search.best, pr.problem);

  pr.plan_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return pr;
}

void write_strategy_doc(const std::string& path, const StrategyEval& ev,
                        const PlanResult& pr) {
  ordered_json assignment;
  std::vector<std::vector<std::string>> per_row(static_cast<size_t>(ev.phi.rows()));
  for (size_t j = 0; j < pr.problem.sr.units.size(); ++j)
    per_row[static_cast<size_t>(ev.phi.row_of[j])].push_back(pr.problem.sr.units[j].id);
  assignment[std::to_string(pr.kin.target.id)] = per_row[0];
  for (size_t r = 0; r < pr.kin.relays.size(); ++r)
    assignment[std::to_string(pr.kin.relays[r].state.id)] = per_row[r + 1];

  ordered_json doc;
  doc["strategy"] = ev.name;
  doc["payload"] = pr.problem.sr.name;
  doc["relay_count"] = ev.phi.relay_count;
  doc["feasible"] = ev.feasibility.ok;
  doc["assignment"] = std::move(assignment);
  write_text(path, doc.dump(2) + "\n");
}

Assignment load_strategy_doc(const std::string& path, const SemanticRepresentation& sr,
                             const Kinematics& kin) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open strategy document '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse, "strategy document '" + path + "': " + e.what());
  }

  Assignment phi;
  phi.relay_count = static_cast<int>(kin.relays.size());
  phi.row_of.assign(sr.units.size(), -1);
  if (!doc.contains("assignment") || !doc["assignment"].is_object())
    fail(errc::validation, "strategy document '" + path + "' lacks an assignment object");
  for (const auto& [key, ids] : doc["assignment"].items()) {
    int vid = 0;
    try {
      vid = std::stoi(key);
    } catch (...) {
      fail(errc::parse, "strategy document '" + path + "': vehicle key '" + key + "'");
    }
    int row = -1;
    if (vid == kin.target.id) {
      row = 0;
    } else {
      for (size_t r = 0; r < kin.relays.size(); ++r)
        if (kin.relays[r].state.id == vid) {
          row = static_cast<int>(r) + 1;
          break;
        }
    }
    if (row < 0)
      fail(errc::validation, "strategy document '" + path + "': vehicle " + key +
                                 " is not part of the scenario");
    for (const auto& id : ids) {
      const int j = unit_index(sr, id.get<std::string>());
      if (j < 0)
        fail(errc::validation, "strategy document '" + path + "': unknown unit '" +
                                   id.get<std::string>() + "'");
      if (phi.row_of[static_cast<size_t>(j)] != -1)
        fail(errc::validation, "strategy document '" + path + "': unit '" +
                                   id.get<std::string>() + "' listed twice");
      phi.row_of[static_cast<size_t>(j)] = row;
    }
  }
  for (size_t j = 0; j < phi.row_of.size(); ++j)
    if (phi.row_of[j] == -1)
      fail(errc::validation, "strategy document '" + path + "': unit '" + sr.units[j].id +
                                 "' is not assigned to any vehicle");
  return phi;
}

namespace {

std::string metrics_row(const StrategyEval& ev, const PlanResult& pr) {
  const double planned_accuracy = sr_accuracy(pr.problem.sr);
  const double total_j = ev.energy.total();
  std::ostringstream row;
  row << ev.name << ',' << format_double(pr.q_max_bits / 1e6) << ','
      << format_double(ev.energy.v2i_j) << ',' << format_double(ev.energy.v2v_j) << ','
      << format_double(ev.theta) << ',' << format_double(planned_accuracy) << ','
      << format_double(semantic_energy_efficiency(planned_accuracy, total_j)) << ','
      << format_double(ev.u) << ',' << format_double(ev.u_hat) << ','
      << (ev.feasibility.ok ? 1 : 0) << '\n';
  return row.str();
}

std::string assignment_line(const StrategyEval& ev, const PlanResult& pr) {
  std::ostringstream line;
  std::vector<std::vector<std::string>> per_row(static_cast<size_t>(ev.phi.rows()));
  for (size_t j = 0; j < pr.problem.sr.units.size(); ++j)
    per_row[static_cast<size_t>(ev.phi.row_of[j])].push_back(pr.problem.sr.units[j].id);
  auto print_row = [&](int vid, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    line << "    vehicle " << vid << " <- {";
    for (size_t i = 0; i < ids.size(); ++i) line << (i ? "," : "") << ids[i];
    line << "}\n";
  };
  print_row(pr.kin.target.id, per_row[0]);
  for (size_t r = 0; r < pr.kin.relays.size(); ++r)
    print_row(pr.kin.relays[r].state.id, per_row[r + 1]);
  return line.str();
}

}  // namespace

void write_plan_reports(const PlanResult& pr, const std::string& out_dir) {
  ensure_dir(out_dir);
  const fs::path out(out_dir);

  write_strategy_doc((out / "strategy_baseline.json").string(), pr.baseline_eval, pr);
  write_strategy_doc((out / "strategy_mmtsa.json").string(), pr.mmtsa_eval, pr);

  std::ostringstream metrics;
  metrics << "strategy,q_max_mbit,p_v2i_j,p_v2v_j,theta,planned_accuracy,ee_s_per_j,u,"
             "u_hat,feasible\n";
  metrics << metrics_row(pr.baseline_eval, pr);
  metrics << metrics_row(pr.mmtsa_eval, pr);
  write_text((out / "metrics.csv").string(), metrics.str());

  std::ostringstream trace;
  trace << "iteration,current_u_hat,best_u_hat,accepted\n";
  for (const auto& pt : pr.search.points)
    trace << pt.iteration << ',' << format_double(pt.current_u_hat) << ','
          << format_double(pt.best_u_hat) << ',' << (pt.accepted ? 1 : 0) << '\n';
  write_text((out / "search_trace.csv").string(), trace.str());

  std::ostringstream sum;
  sum << "cooperative transmission plan\n";
  sum << "=============================\n\n";
  sum << "road: unit spacing " << format_double(pr.kin.road.rsu_spacing_m)
      << " m, cell radius " << format_double(pr.kin.road.rsu_radius_m)
      << " m, v2v radius " << format_double(pr.kin.road.vehicle_radius_m) << " m\n";
  sum << "target: id " << pr.kin.target.id << ", offset "
      << format_double(pr.kin.target.offset_m) << " m, speed "
      << format_double(pr.kin.target.speed_mps) << " m/s, cell dwell "
      << format_double(pr.kin.target_dwell_s) << " s\n";
  sum << "deadline: " << format_double(pr.problem.t_max_s) << " s\n";
  sum << "rates: v2i " << format_double(pr.problem.rates.v2i_bps / 1e6)
      << " Mbit/s, v2v " << format_double(pr.problem.rates.v2v_bps / 1e6) << " Mbit/s\n";
  sum << "achievable throughput: " << format_double(pr.q_max_bits / 1e6) << " Mbit\n\n";

  sum << "relays (encounter order):\n";
  sum << "    id offset_m speed_mps encounter_s window_s cell_dwell_s\n";
  for (const auto& r : pr.kin.relays)
    sum << "    " << r.state.id << ' ' << format_double(r.state.offset_m) << ' '
        << format_double(r.state.speed_mps) << ' ' << format_double(r.encounter_s) << ' '
        << format_double(r.window_s) << ' ' << format_double(r.dwell_s) << '\n';
  if (!pr.kin.excluded_ids.empty()) {
    sum << "excluded (window already open):";
    for (int id : pr.kin.excluded_ids) sum << ' ' << id;
    sum << '\n';
  }
  sum << '\n';

  sum << "payload: " << pr.problem.sr.name << ", " << pr.problem.sr.units.size()
      << " units, " << format_double(sr_volume(pr.problem.sr) / 1e6) << " Mbit, accuracy "
      << format_double(sr_accuracy(pr.problem.sr)) << "\n\n";

  for (const StrategyEval* ev : {&pr.baseline_eval, &pr.mmtsa_eval}) {
    sum << ev->name << ": " << (ev->feasibility.ok ? "feasible" : "infeasible")
        << ", v2i " << format_double(ev->energy.v2i_j) << " J, v2v "
        << format_double(ev->energy.v2v_j) << " J, reliability "
        << format_double(ev->theta) << ", objective " << format_double(ev->u)
        << ", penalized " << format_double(ev->u_hat) << '\n';
    sum << assignment_line(*ev, pr);
  }
  sum << "search: temperature " << format_double(pr.search.temperature) << ", iterations "
      << pr.search.points.back().iteration << ", accepted " << pr.search.accepted_count
      << '\n';
  if (!pr.warnings.empty()) {
    sum << "\nwarnings:\n";
    for (const auto& w : pr.warnings) sum << "  - " << w << '\n';
  }
  write_text((out / "summary.txt").string(), sum.str());

  char timing[96];
  std::snprintf(timing, sizeof(timing), "plan_seconds=%.3f\n", pr.plan_seconds);
  append_text((out / "timing.log").string(), timing);
}

ExecutionReport replay_plan(const ExperimentConfig& cfg, const PlanResult& pr,
                            uint64_t seed, const std::string& trace_override) {
  const double step_s = cfg.replay_step_ms / 1000.0;
  std::string trace_path = trace_override;
  if (trace_path.empty() && cfg.perturbation.mode == PerturbationSpec::Mode::trace)
    trace_path = cfg.perturbation.trace_path;
  if (!trace_path.empty()) {
    MobilityTrace tr = load_trace(trace_path);
    return replay(pr.problem, pr.mmtsa_eval.phi,
                  motion_from_trace(std::move(tr), pr.kin, pr.problem.t_max_s), step_s);
  }
  return replay_with_spec(pr.problem, pr.mmtsa_eval.phi, cfg.perturbation, seed, step_s);
}

void write_replay_report(const std::string& path, const PlanResult& pr,
                         const ExecutionReport& rep, uint64_t seed,
                         const std::string& mode) {
  ordered_json doc;
  doc["strategy"] = pr.mmtsa_eval.name;
  doc["mode"] = mode;
  doc["seed"] = seed;
  doc["assigned_units"] = [&] {
    std::vector<std::string> ids;
    for (const auto& u : pr.problem.sr.units) ids.push_back(u.id);
    return ids;
  }();
  doc["delivered_units"] = rep.delivered_units;
  doc["realized_accuracy"] = rep.realized_accuracy;
  doc["planned_accuracy"] = sr_accuracy(pr.problem.sr);
  doc["v2i_energy_j"] = rep.v2i_energy_j;
  doc["v2v_energy_j"] = rep.v2v_energy_j;
  doc["completion_s"] = rep.completion_s;
  doc["ee_s_per_j"] = rep.ee_s_per_j;
  ordered_json links = nlohmann::json::array();
  for (const auto& l : rep.links) {
    ordered_json e;
    e["kind"] = l.kind;
    e["vehicle"] = l.vehicle_id;
    e["open_s"] = l.open_s;
    e["close_s"] = l.close_s;
    e["bits"] = l.bits_moved;
    links.push_back(std::move(e));
  }
  doc["links"] = std::move(links);
  write_text(path, doc.dump(2) + "\n");
}

std::vector<SweepRow> sweep(const ExperimentConfig& cfg, const PlanResult& pr,
                            uint64_t seed_lo, uint64_t seed_hi) {
  if (seed_hi < seed_lo) fail(errc::invalid_argument, "empty seed range");
  const size_t n = static_cast<size_t>(seed_hi - seed_lo + 1);
  std::vector<SweepRow> rows(n);

  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(n, std::thread::hardware_concurrency()));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run_range = [&](size_t worker) {
    for (size_t i = worker; i < n; i += workers) {
      try {
        const uint64_t seed = seed_lo + i;
        const ExecutionReport rep = replay_plan(cfg, pr, seed, "");
        rows[i] = {seed,
                   rep.delivered_units.size(),
                   pr.problem.sr.units.size(),
                   rep.realized_accuracy,
                   rep.v2i_energy_j,
                   rep.v2v_energy_j,
                   rep.completion_s,
                   rep.ee_s_per_j};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(run_range, w);
  run_range(0);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "seed,delivered,assigned,realized_accuracy,v2i_j,v2v_j,completion_s,ee_s_per_j\n";
  for (const auto& r : rows)
    out << r.seed << ',' << r.delivered << ',' << r.assigned << ','
        << format_double(r.realized_accuracy) << ',' << format_double(r.v2i_j) << ','
        << format_double(r.v2v_j) << ',' << format_double(r.completion_s) << ','
        << format_double(r.ee_s_per_j) << '\n';
  write_text(path, out.str());
}

OracleResult run_oracle(const PlanResult& pr) {
  OracleResult res;
  res.states = state_count(static_cast<int>(pr.problem.sr.units.size()),
                           static_cast<int>(pr.kin.relays.size()));
  res.best = exhaustive_solve(pr.problem);
  res.best_u_hat = penalized_U_hat(res.best, pr.problem);
  res.search_u_hat = pr.mmtsa_eval.u_hat;
  res.search_matches = res.search_u_hat <= res.best_u_hat + 1e-9;
  return res;
}

void write_oracle_report(const std::string& path, const PlanResult& pr,
                         const OracleResult& oracle) {
  ordered_json doc;
  doc["states"] = oracle.states;
  doc["best_u_hat"] = oracle.best_u_hat;
  doc["search_u_hat"] = oracle.search_u_hat;
  doc["search_matches"] = oracle.search_matches;
  ordered_json assignment;
  std::vector<std::vector<std::string>> per_row(static_cast<size_t>(oracle.best.rows()));
  for (size_t j = 0; j < pr.problem.sr.units.size(); ++j)
    per_row[static_cast<size_t>(oracle.best.row_of[j])].push_back(
        pr.problem.sr.units[j].id);
  assignment[std::to_string(pr.kin.target.id)] = per_row[0];
  for (size_t r = 0; r < pr.kin.relays.size(); ++r)
    assignment[std::to_string(pr.kin.relays[r].state.id)] = per_row[r + 1];
  doc["best_assignment"] = std::move(assignment);
  write_text(path, doc.dump(2) + "\n");
}

}  // namespace scf
