#pragma once
// Shared scenario builders for the test suite: the reference highway
// scenario (21 vehicles), its channel constants, and the SR1 payload.
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "channel.hpp"
#include "scenario.hpp"
#include "semantics.hpp"
#include "strategy.hpp"

namespace testfix {

inline scf::ChannelParams reference_channel() {
  scf::ChannelParams p;
  p.noise_w = 1e-8;  // -110 dBm/Hz over 1 MHz
  p.fading = {6.0, 6.0, std::pow(10.0, 0.1)};
  p.v2i = {1e6, std::pow(10.0, 1.527), 2.2, 1.0, 1.0, 500.0};
  p.v2v = {1e6, std::pow(10.0, 1.144), 2.0, 1.0, 1.0, 300.0};
  return p;
}

inline std::vector<scf::VehicleState> reference_vehicles() {
  return {{0, 200, 10.97},  {1, 382, 15.44},  {2, 484, 10.81},  {3, 403, 14.14},
          {4, 438, 11.28},  {5, 340, 13.31},  {6, 336, 13.41},  {7, 317, 13.10},
          {8, 260, 14.03},  {9, 308, 12.30},  {10, 214, 13.30}, {11, 253, 11.41},
          {12, 220, 11.81}, {13, 281, 8.89},  {14, 0.12, 13.63}, {15, -39, 12.38},
          {16, -50, 11.80}, {17, -10, 10.72}, {18, -112, 12.90}, {19, -202, 13.45},
          {20, -254, 13.53}};
}

inline scf::Kinematics reference_kinematics() {
  auto v = reference_vehicles();
  return scf::predict(scf::RoadGeometry{}, v[0], {v.begin() + 1, v.end()});
}

inline scf::SemanticRepresentation sr1() {
  scf::SemanticRepresentation sr;
  sr.name = "SR1";
  const struct {
    const char* id;
    double alpha;
    double mbit;
  } rows[] = {{"a", 0.86, 11}, {"b", 1.08, 14}, {"c", 1.17, 15}, {"d", 1.87, 24},
              {"e", 0.23, 3},  {"f", 1.56, 20}, {"g", 1.79, 23}, {"h", 0.31, 4},
              {"i", 0.08, 1},  {"j", 1.71, 22}, {"k", 0.54, 7},  {"l", 0.70, 9},
              {"m", 0.31, 4},  {"n", 0.62, 8}};
  for (const auto& r : rows) sr.units.push_back({r.id, r.id, r.alpha, r.mbit * 1e6});
  return sr;
}

inline scf::Problem reference_problem(double kappa1 = 0.5, double kappa2 = 0.1,
                                      double t_max = 40.0) {
  return scf::make_problem(reference_kinematics(), reference_channel(), sr1(), kappa1,
                           kappa2, 1.5, 0.5, t_max);
}

// fresh scratch directory per tag
inline std::string temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("scfsim_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace testfix
