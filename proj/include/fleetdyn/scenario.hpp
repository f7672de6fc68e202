#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fleetdyn/dynamics.hpp"
#include "fleetdyn/error.hpp"

namespace fleetdyn {

/// Named parameter set, initial state and horizon of one policy scenario.
class ScenarioSpec {
 public:
  ScenarioSpec(std::string name, LvmParams params, FleetState initial, double t_end, double dt)
      : name_(std::move(name)), params_(params), initial_(initial), t_end_(t_end), dt_(dt) {
    detail::require(!name_.empty(), "scenario: name must not be empty");
    detail::require(initial_.finite() && initial_.non_negative(),
                    "scenario: initial fleets must be finite and >= 0");
    detail::require(std::isfinite(t_end_) && t_end_ > initial_.t,
                    "scenario: t_end must exceed the initial time");
    detail::require(detail::finite_positive(dt_), "scenario: dt must be > 0");
  }

  const std::string& name() const noexcept { return name_; }
  const LvmParams& params() const noexcept { return params_; }
  const FleetState& initial() const noexcept { return initial_; }
  double t_end() const noexcept { return t_end_; }
  double dt() const noexcept { return dt_; }

 private:
  std::string name_;
  LvmParams params_;
  FleetState initial_;
  double t_end_;
  double dt_;
};

inline constexpr double scenario_start_year = 2020.0;
inline constexpr double scenario_initial_conventional = 28.95;  // growth model at 2020
inline constexpr double scenario_end_year = 2100.0;
inline constexpr double scenario_dt = 0.1;

/// low / moderate / aggressive policy scenarios.
inline ScenarioSpec builtin_scenario(std::string_view name) {
  double coupling = 0.0, mu_h = 0.0;
  if (name == "low") {
    coupling = 0.001;
    mu_h = 0.05;
  } else if (name == "moderate") {
    coupling = 0.005;
    mu_h = 0.35;
  } else if (name == "aggressive") {
    coupling = 0.01;
    mu_h = 0.65;
  } else {
    throw InvalidArgument("unknown scenario '" + std::string(name) +
                          "' (expected low, moderate or aggressive)");
  }
  return ScenarioSpec(std::string(name), LvmParams(0.01, 0.01, coupling, coupling, 0.65, mu_h),
                      FleetState{scenario_start_year, scenario_initial_conventional, 0.0},
                      scenario_end_year, scenario_dt);
}

inline const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names{"low", "moderate", "aggressive"};
  return names;
}

inline Trajectory run_scenario(const ScenarioSpec& spec) {
  return integrate(ModifiedSystem{spec.params()}, spec.initial(), spec.t_end(), spec.dt());
}

/// Runs independent scenarios on up to `threads` workers. Each result depends
/// only on its own spec, so output equals a sequential run.
inline std::vector<Trajectory> run_batch(const std::vector<ScenarioSpec>& specs,
                                         unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<Trajectory> out;
  out.reserve(specs.size());
  for (std::size_t begin = 0; begin < specs.size(); begin += threads) {
    const std::size_t end = std::min(specs.size(), begin + threads);
    std::vector<std::future<Trajectory>> jobs;
    for (std::size_t i = begin; i < end; ++i)
      jobs.push_back(std::async(std::launch::async, [&spec = specs[i]] { return run_scenario(spec); }));
    for (auto& j : jobs) out.push_back(j.get());
  }
  return out;
}

/// Hydrogen share y / (x + y) at `year`, linearly interpolated.
inline double zev_share(const Trajectory& traj, double year) {
  const FleetState s = traj.at(year);
  const double total = s.x + s.y;
  if (total == 0.0) throw InvalidArgument("zev_share: total fleet is zero");
  return s.y / total;
}

enum class TargetMetric { ZevShare };

inline std::string_view to_string(TargetMetric) { return "zev_share"; }

struct TargetCheck {
  double year = 0.0;
  TargetMetric metric = TargetMetric::ZevShare;
  double expected = 0.0;
  double tolerance = 0.0;
  double observed = 0.0;
  bool pass = false;
};

inline std::vector<TargetCheck> compare_targets(const Trajectory& traj,
                                                std::vector<TargetCheck> checks) {
  for (auto& c : checks) {
    detail::require(c.tolerance >= 0.0, "compare_targets: tolerance must be >= 0");
    c.observed = zev_share(traj, c.year);
    c.pass = std::abs(c.observed - c.expected) <= c.tolerance;
  }
  return checks;
}

/// Published 2050 zero-emission shares for the builtin scenarios. The
/// aggressive scenario has none.
inline std::vector<TargetCheck> published_targets(std::string_view name) {
  if (name == "low") return {TargetCheck{2050.0, TargetMetric::ZevShare, 0.10, 0.05}};
  if (name == "moderate") return {TargetCheck{2050.0, TargetMetric::ZevShare, 0.92, 0.05}};
  return {};
}

/// Hydrogen uptake dy/dt at `year` by a centred difference over one step.
inline double new_hydrogen_vehicles_per_year(const Trajectory& traj, double year) {
  const double h = traj.dt();
  if (!traj.covers(year - h) || !traj.covers(year + h))
    throw RangeError("new_hydrogen_vehicles_per_year: year " + std::to_string(year) +
                     " is not interior to the trajectory");
  return (traj.at(year + h).y - traj.at(year - h).y) / (2.0 * h);
}

}  // namespace fleetdyn
