#pragma once

#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"
#include "optimizer.hpp"
#include "scenario.hpp"

namespace scf {

struct PerturbationSpec {
  enum class Mode { none, gaussian, trace } mode = Mode::none;
  double sigma_mps = 0.0;   // gaussian mode
  std::string trace_path;   // trace mode
};

struct ExperimentConfig {
  RoadGeometry road;
  ChannelParams channel;
  double kappa1 = 0.5;
  double kappa2 = 0.1;
  double theta_t = 1.5;
  double theta_r = 0.5;
  SearchConfig search;
  double t_max_s = 0.0;

  std::string sr_fixture_path;           // resolved to an absolute-ish path
  // budget for re-extracting from the fixture pool; empty = take the pool as
  // is, "qmax" = use the predicted throughput, otherwise a number in Mbit
  std::string sr_budget;

  std::vector<VehicleState> vehicles;    // inline scenario (vehicle 0 = target)
  std::string trace_path;                // or a mobility trace

  PerturbationSpec perturbation;
  int replay_step_ms = 1;

  std::string source_dir;  // directory of the config file (path resolution)
};

// Parse + validate a config document.  All dB-labelled quantities are
// converted to linear units here, once; defaults cover every channel and
// weight field.
ExperimentConfig load_config(const std::string& path);

double db_to_linear(double db);

}  // namespace scf
