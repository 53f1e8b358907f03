#include "trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace scf {

MobilityTrace load_trace(const std::string& path, double continuity_tol_m) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open trace file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) fail(errc::parse, "trace '" + path + "' is empty");
  // tolerate trailing \r from foreign editors
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,vehicle_id,pos_m,speed_mps")
    fail(errc::parse, "trace '" + path + "' must start with header t,vehicle_id,pos_m,speed_mps");

  MobilityTrace trace;
  bool any = false;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(row, field, ',')) goto malformed;
      try {
        size_t used = 0;
        vals[i] = std::stod(field, &used);
        while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
          ++used;
        if (used != field.size()) goto malformed;
      } catch (...) {
        goto malformed;
      }
    }
    if (std::getline(row, field, ',')) goto malformed;
    {
      const int vid = static_cast<int>(vals[1]);
      if (vals[1] != vid) goto malformed;
      auto& vec = trace.samples[vid];
      if (!vec.empty()) {
        const TraceSample& prev = vec.back();
        if (vals[0] <= prev.t)
          fail(errc::validation, "trace '" + path + "' line " + std::to_string(line_no) +
                                     ": time not increasing for vehicle " +
                                     std::to_string(vid));
        const double dt = vals[0] - prev.t;
        if (std::abs(vals[2] - prev.pos_m - prev.speed_mps * dt) > continuity_tol_m)
          fail(errc::validation, "trace '" + path + "' line " + std::to_string(line_no) +
                                     ": position jump breaks continuity for vehicle " +
                                     std::to_string(vid));
      }
      vec.push_back({vals[0], vals[2], vals[3]});
      trace.t_begin = any ? std::min(trace.t_begin, vals[0]) : vals[0];
      trace.t_end = any ? std::max(trace.t_end, vals[0]) : vals[0];
      any = true;
      continue;
    }
  malformed:
    fail(errc::parse,
         "trace '" + path + "' line " + std::to_string(line_no) + ": malformed row");
  }
  if (!any) fail(errc::parse, "trace '" + path + "' has no data rows");
  return trace;
}

std::vector<VehicleState> planner_view(const MobilityTrace& trace, const RoadGeometry& geo) {
  if (!trace.samples.count(0))
    fail(errc::validation, "trace has no vehicle 0 (the target)");
  if (trace.t_begin != 0.0)
    fail(errc::validation, "trace must start at t=0 to serve as a planning input");

  std::vector<VehicleState> out;
  for (const auto& [vid, samples] : trace.samples) {
    double mean_speed = 0.0;
    for (const auto& s : samples) mean_speed += s.speed_mps;
    mean_speed /= static_cast<double>(samples.size());

    VehicleState v;
    v.id = vid;
    if (vid == 0) {
      if (!(mean_speed > 0.0))
        fail(errc::validation, "target speed must be positive (driving toward unit B)");
      v.offset_m = samples.front().pos_m;
      v.speed_mps = mean_speed;
      out.insert(out.begin(), v);
    } else {
      if (!(mean_speed < 0.0))
        fail(errc::validation, "relay " + std::to_string(vid) +
                                   " speed must be negative (driving toward unit A)");
      v.offset_m = geo.rsu_spacing_m - samples.front().pos_m;
      v.speed_mps = -mean_speed;
      out.push_back(v);
    }
  }
  return out;
}

bool has_vehicle(const MobilityTrace& trace, int vehicle_id) {
  return trace.samples.count(vehicle_id) > 0;
}

double position_at(const MobilityTrace& trace, int vehicle_id, double t) {
  auto it = trace.samples.find(vehicle_id);
  if (it == trace.samples.end())
    fail(errc::invalid_argument, "trace has no vehicle " + std::to_string(vehicle_id));
  const auto& v = it->second;
  if (t <= v.front().t) return v.front().pos_m;
  if (t > v.back().t)
    fail(errc::validation, "trace ends at t=" + std::to_string(v.back().t) +
                               " s, before requested t=" + std::to_string(t) + " s");
  auto hi = std::lower_bound(v.begin(), v.end(), t,
                             [](const TraceSample& s, double tv) { return s.t < tv; });
  if (hi->t == t) return hi->pos_m;
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->pos_m * (1.0 - w) + hi->pos_m * w;
}

void write_trace(const std::string& path, const RoadGeometry& geo,
                 const std::vector<VehicleState>& vehicles, double step_s,
                 double horizon_s) {
  if (!(step_s > 0.0) || !(horizon_s > 0.0))
    fail(errc::invalid_argument, "write_trace: step and horizon must be > 0");
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot write trace file '" + path + "'");
  out << "t,vehicle_id,pos_m,speed_mps\n";
  char buf[160];
  const long long steps = static_cast<long long>(std::floor(horizon_s / step_s + 1e-9));
  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * step_s;
    for (const auto& v : vehicles) {
      double pos, speed;
      if (v.id == 0) {
        pos = v.offset_m + v.speed_mps * t;
        speed = v.speed_mps;
      } else {
        pos = geo.rsu_spacing_m - v.offset_m - v.speed_mps * t;
        speed = -v.speed_mps;
      }
      std::snprintf(buf, sizeof(buf), "%.6f,%d,%.6f,%.6f\n", t, v.id, pos, speed);
      out << buf;
    }
  }
}

}  // namespace scf
