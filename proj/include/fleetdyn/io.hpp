#pragma once

// Text formats: trajectory / fleet / plan / gradient CSVs and the flat
// `key = value` configuration file. Numbers are written with six decimals,
// '.' as separator and no grouping, independent of the global locale.

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "fleetdyn/analytics.hpp"
#include "fleetdyn/calibration.hpp"
#include "fleetdyn/dynamics.hpp"
#include "fleetdyn/infra.hpp"
#include "fleetdyn/scenario.hpp"

namespace fleetdyn {

inline std::string format_fixed(double v, int decimals = 6) {
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

/// Sample times t_begin, t_begin + step, ... up to t_end (inclusive when it
/// lands on the grid within rounding).
inline std::vector<double> output_times(const Trajectory& traj, double step) {
  detail::require(step > 0.0, "output step must be > 0");
  std::vector<double> ts;
  const double span = traj.t_end() - traj.t_begin();
  const auto n = static_cast<long>(std::floor(span / step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    double t = traj.t_begin() + static_cast<double>(i) * step;
    if (t > traj.t_end()) t = traj.t_end();
    ts.push_back(t);
  }
  return ts;
}

/// `time,conv,hydro,total`, one row per output step.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj, double step = 1.0) {
  out << "time,conv,hydro,total\n";
  for (double t : output_times(traj, step)) {
    const FleetState s = traj.at(t);
    out << format_fixed(t) << ',' << format_fixed(s.x) << ',' << format_fixed(s.y) << ','
        << format_fixed(s.x + s.y) << '\n';
  }
}

struct TrajectoryRow {
  double time = 0.0;
  double conv = 0.0;
  double hydro = 0.0;
  double total = 0.0;
};

inline std::vector<TrajectoryRow> parse_trajectory_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<TrajectoryRow> rows;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = detail::trim(line);
    if (row.empty()) continue;
    if (!header) {
      if (row != "time,conv,hydro,total")
        throw ParseError("expected header 'time,conv,hydro,total'", lineno);
      header = true;
      continue;
    }
    std::array<double, 4> v{};
    std::size_t pos = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto next = row.find(',', pos);
      const bool last = k == 3;
      if (last != (next == std::string_view::npos))
        throw ParseError("expected 4 comma-separated fields", lineno);
      const auto field = row.substr(pos, last ? std::string_view::npos : next - pos);
      if (!detail::parse_number(field, v[k]))
        throw ParseError("bad number '" + std::string(field) + "'", lineno);
      pos = next + 1;
    }
    rows.push_back({v[0], v[1], v[2], v[3]});
  }
  if (!header) throw ParseError("empty trajectory CSV");
  return rows;
}

/// `year,fleet_mveh` at whole-year steps; readable by parse_fleet_csv.
inline void write_fleet_csv(std::ostream& out, const Trajectory& traj) {
  out << "year,fleet_mveh\n";
  for (double t : output_times(traj, 1.0))
    out << static_cast<long>(std::lround(t)) << ',' << format_fixed(traj.at(t).x) << '\n';
}

inline void write_targets_csv(std::ostream& out, const std::vector<TargetCheck>& checks) {
  out << "year,metric,expected,tolerance,observed,pass\n";
  for (const auto& c : checks)
    out << format_fixed(c.year) << ',' << to_string(c.metric) << ',' << format_fixed(c.expected)
        << ',' << format_fixed(c.tolerance) << ',' << format_fixed(c.observed) << ','
        << (c.pass ? "pass" : "fail") << '\n';
}

inline void write_gradients_csv(std::ostream& out, const SensitivityPair& g) {
  out << "param,grad_hydrogen,grad_conventional,plog_hydrogen,plog_conventional\n";
  const auto h = g.hydrogen.values();
  const auto c = g.conventional.values();
  for (std::size_t i = 0; i < h.size(); ++i)
    out << SensitivityVector::names[i] << ',' << format_fixed(h[i]) << ',' << format_fixed(c[i])
        << ',' << format_fixed(pseudo_log(h[i])) << ',' << format_fixed(pseudo_log(c[i]))
        << '\n';
}

inline void write_plan_csv(std::ostream& out, const std::vector<DeploymentPlan>& plans) {
  out << "scenario,vps,stations_per_year,total_stations,annual_capex_gbp,total_capex_gbp\n";
  for (const auto& p : plans)
    out << to_string(p.scenario_id) << ',' << p.vps.nearest << ',' << p.stations_per_year << ','
        << p.total_stations << ',' << format_fixed(p.annual_capex) << ','
        << format_fixed(p.total_capex) << '\n';
}

/// Human-readable plan summary.
inline void write_plan_text(std::ostream& out, const DeploymentPlan& p,
                            const PetrolEquivalence& petrol) {
  out << "scenario " << to_string(p.scenario_id) << ": " << to_string(p.station) << " stations, "
      << to_string(p.vehicle) << " vehicles (" << to_string(p.model) << " capacity model";
  if (p.model != CapacityModel::DailyFill) out << ", sensitivity only";
  out << ")\n"
      << "  uptake                " << format_fixed(p.uptake) << " Mveh/year over "
      << p.horizon_years << " years\n"
      << "  vehicles per station  " << p.vps.nearest << " (raw " << format_fixed(p.vps.raw)
      << ", floor " << p.vps.floor << ")\n"
      << "  stations per year     " << p.stations_per_year << " (raw "
      << format_fixed(p.stations_per_year_raw) << ")\n"
      << "  total stations        " << p.total_stations << "\n"
      << "  annual capex          GBP " << format_fixed(p.annual_capex / 1e9) << " bn (raw "
      << format_fixed(p.annual_capex_raw / 1e9) << " bn)\n"
      << "  total capex           GBP " << format_fixed(p.total_capex / 1e9) << " bn\n"
      << "  petrol equivalence    ratio " << format_fixed(petrol.ratio) << " -> "
      << format_fixed(petrol.stations) << " filling stations; at rounded ratio "
      << format_fixed(petrol.ratio_rounded, 0) << " -> "
      << format_fixed(petrol.stations_at_rounded) << "\n";
}

/// Flat configuration: one `key = value` per line, `#` starts a comment.
using KeyValueConfig = std::map<std::string, std::string>;

inline KeyValueConfig parse_key_value_config(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view row = line;
    if (const auto hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);
    row = detail::trim(row);
    if (row.empty()) continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
    const auto key = detail::trim(row.substr(0, eq));
    const auto value = detail::trim(row.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (value.empty()) throw ParseError("empty value for '" + std::string(key) + "'", lineno);
    if (!cfg.emplace(std::string(key), std::string(value)).second)
      throw ParseError("duplicate key '" + std::string(key) + "'", lineno);
  }
  return cfg;
}

}  // namespace fleetdyn
