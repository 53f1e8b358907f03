#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "errors.hpp"

namespace scf {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

double num_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    fail(errc::validation, std::string("config field '") + key + "' must be a number");
  return obj[key].get<double>();
}

double require_num(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key))
    fail(errc::validation, "config field '" + where + key + "' is missing");
  if (!obj[key].is_number())
    fail(errc::validation, "config field '" + where + key + "' must be a number");
  return obj[key].get<double>();
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    fail(errc::parse, "config parse error in '" + path + "': " + e.what());
  }
  if (!doc.is_object()) fail(errc::parse, "config root must be an object");

  ExperimentConfig cfg;
  cfg.source_dir = std::filesystem::path(path).parent_path().string();
  if (cfg.source_dir.empty()) cfg.source_dir = ".";

  const json road = doc.value("road", json::object());
  cfg.road.rsu_spacing_m = num_or(road, "rsu_spacing_m", 1500.0);
  cfg.road.rsu_radius_m = num_or(road, "rsu_radius_m", 500.0);
  cfg.road.vehicle_radius_m = num_or(road, "vehicle_radius_m", 300.0);
  validate(cfg.road);

  const json ch = doc.value("channel", json::object());
  const double bandwidth = num_or(ch, "bandwidth_hz", 1e6);
  // noise is specified as a spectral density in dBm/Hz; total noise power is
  // density * bandwidth, converted to watts
  const double noise_dbm_hz = num_or(ch, "noise_dbm_per_hz", -110.0);
  cfg.channel.noise_w = db_to_linear(noise_dbm_hz) * 1e-3 * bandwidth;

  cfg.channel.v2i.bandwidth_hz = bandwidth;
  cfg.channel.v2i.snr_threshold = db_to_linear(num_or(ch, "snr_threshold_v2i_db", 15.27));
  cfg.channel.v2i.pathloss_exp = num_or(ch, "pathloss_exponent_v2i", 2.2);
  cfg.channel.v2i.ref_loss = num_or(ch, "reference_loss_v2i", 1.0);
  cfg.channel.v2i.antenna_gain = num_or(ch, "antenna_gain_v2i", 1.0);
  cfg.channel.v2i.range_m = cfg.road.rsu_radius_m;

  cfg.channel.v2v.bandwidth_hz = bandwidth;
  cfg.channel.v2v.snr_threshold = db_to_linear(num_or(ch, "snr_threshold_v2v_db", 11.44));
  cfg.channel.v2v.pathloss_exp = num_or(ch, "pathloss_exponent_v2v", 2.0);
  cfg.channel.v2v.ref_loss = num_or(ch, "reference_loss_v2v", 1.0);
  cfg.channel.v2v.antenna_gain = num_or(ch, "antenna_gain_v2v", 1.0);
  cfg.channel.v2v.range_m = cfg.road.vehicle_radius_m;

  cfg.channel.fading.m = num_or(ch, "fading_shape_m", 6.0);
  cfg.channel.fading.m_s = num_or(ch, "shadowing_shape_ms", 6.0);
  if (ch.contains("mean_gain_linear")) {
    cfg.channel.fading.mean_gain = require_num(ch, "mean_gain_linear", "channel.");
  } else {
    cfg.channel.fading.mean_gain = db_to_linear(num_or(ch, "mean_gain_db", 1.0));
  }
  validate(cfg.channel);

  const json w = doc.value("weights", json::object());
  cfg.kappa1 = num_or(w, "kappa1", 0.5);
  cfg.kappa2 = num_or(w, "kappa2", 0.1);
  cfg.theta_t = num_or(w, "theta_direct", 1.5);
  cfg.theta_r = num_or(w, "theta_relay", 0.5);

  const json s = doc.value("search", json::object());
  cfg.search.temperature = num_or(s, "temperature", 0.0);
  cfg.search.iterations = static_cast<long long>(num_or(s, "iterations", 200000));
  cfg.search.seed = static_cast<uint64_t>(num_or(s, "seed", 1));
  cfg.search.trace_stride = static_cast<int>(num_or(s, "trace_stride", 100));
  if (cfg.search.iterations < 1)
    fail(errc::validation, "config field 'search.iterations' must be >= 1");
  if (cfg.search.trace_stride < 1)
    fail(errc::validation, "config field 'search.trace_stride' must be >= 1");

  cfg.t_max_s = require_num(doc, "t_max_s", "");
  if (!(cfg.t_max_s > 0.0)) fail(errc::validation, "config field 't_max_s' must be > 0");

  if (!doc.contains("sr_fixture") || !doc["sr_fixture"].is_string())
    fail(errc::validation, "config field 'sr_fixture' (path) is missing");
  cfg.sr_fixture_path =
      (std::filesystem::path(cfg.source_dir) / doc["sr_fixture"].get<std::string>())
          .lexically_normal()
          .string();
  if (!std::filesystem::exists(cfg.sr_fixture_path))
    fail(errc::validation, "sr fixture '" + cfg.sr_fixture_path + "' does not exist");

  if (doc.contains("sr_budget")) {
    const json& b = doc["sr_budget"];
    if (b.is_string())
      cfg.sr_budget = b.get<std::string>();
    else if (b.is_number())
      cfg.sr_budget = std::to_string(b.get<double>());
    else
      fail(errc::validation, "config field 'sr_budget' must be \"qmax\" or a number (Mbit)");
    if (cfg.sr_budget != "qmax") {
      try {
        (void)std::stod(cfg.sr_budget);
      } catch (...) {
        fail(errc::validation, "config field 'sr_budget' must be \"qmax\" or a number (Mbit)");
      }
    }
  }

  const bool has_vehicles = doc.contains("vehicles");
  const bool has_trace = doc.contains("trace");
  if (has_vehicles == has_trace)
    fail(errc::validation, "config needs exactly one of 'vehicles' or 'trace'");
  if (has_vehicles) {
    if (!doc["vehicles"].is_array() || doc["vehicles"].empty())
      fail(errc::validation, "config field 'vehicles' must be a non-empty array");
    for (const auto& v : doc["vehicles"]) {
      VehicleState st;
      st.id = static_cast<int>(require_num(v, "id", "vehicles[]."));
      st.offset_m = require_num(v, "offset_m", "vehicles[].");
      st.speed_mps = require_num(v, "speed_mps", "vehicles[].");
      cfg.vehicles.push_back(st);
    }
    if (cfg.vehicles.front().id != 0)
      fail(errc::validation, "first entry of 'vehicles' must be the target (id 0)");
  } else {
    cfg.trace_path =
        (std::filesystem::path(cfg.source_dir) / doc["trace"].get<std::string>())
            .lexically_normal()
            .string();
    if (!std::filesystem::exists(cfg.trace_path))
      fail(errc::validation, "trace '" + cfg.trace_path + "' does not exist");
  }

  const json replay = doc.value("replay", json::object());
  cfg.replay_step_ms = static_cast<int>(num_or(replay, "step_ms", 1));
  if (cfg.replay_step_ms < 1)
    fail(errc::validation, "config field 'replay.step_ms' must be >= 1");
  const json pert = replay.value("perturbation", json::object());
  const std::string mode = pert.value("mode", "none");
  if (mode == "none") {
    cfg.perturbation.mode = PerturbationSpec::Mode::none;
  } else if (mode == "gaussian") {
    cfg.perturbation.mode = PerturbationSpec::Mode::gaussian;
    cfg.perturbation.sigma_mps = require_num(pert, "sigma_mps", "replay.perturbation.");
    if (cfg.perturbation.sigma_mps < 0.0)
      fail(errc::validation, "replay.perturbation.sigma_mps must be >= 0");
  } else if (mode == "trace") {
    cfg.perturbation.mode = PerturbationSpec::Mode::trace;
    if (!pert.contains("path") || !pert["path"].is_string())
      fail(errc::validation, "replay.perturbation.path is missing");
    cfg.perturbation.trace_path =
        (std::filesystem::path(cfg.source_dir) / pert["path"].get<std::string>())
            .lexically_normal()
            .string();
  } else {
    fail(errc::validation, "replay.perturbation.mode must be none|gaussian|trace");
  }

  return cfg;
}

}  // namespace scf
