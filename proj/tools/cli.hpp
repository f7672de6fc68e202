#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so the
// tests can drive it in-process.
//
// Exit status: 0 success, 1 runtime/model failure, 2 usage/validation failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fleetdyn/fleetdyn.hpp"

#ifndef FLEETDYN_DATA_DIR
#define FLEETDYN_DATA_DIR "data"
#endif

namespace fleetdyn::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Thrown for bad flag combinations detected after parsing.
class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

namespace detail {

inline std::string default_data_path() { return std::string(FLEETDYN_DATA_DIR) + "/rac_fleet.csv"; }

/// --out wins over FLEETDYN_OUT, which wins over ./out.
inline std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FLEETDYN_OUT"); env != nullptr && *env != '\0') return env;
  return "out";
}

inline std::filesystem::path prepare_output_dir(const std::string& flag) {
  const auto dir = output_dir(flag);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw Error("failed writing '" + path.string() + "'");
}

/// Fills options not given on the command line from a key = value file whose
/// keys match long flag names.
inline void apply_config(CLI::App& cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  const KeyValueConfig cfg = parse_key_value_config(in);
  for (const auto& [key, value] : cfg) {
    if (key == "config") throw UsageError("config: key 'config' is not allowed in a config file");
    CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("config: unknown key '" + key + "'");
    if (opt->count() > 0) continue;  // command line wins
    opt->add_result(value);
    opt->run_callback();
  }
}

inline bool given(const CLI::App& cmd, const std::string& flag) {
  const CLI::Option* opt = cmd.get_option_no_throw(flag);
  return opt != nullptr && opt->count() > 0;
}

}  // namespace detail

struct GrowthArgs {
  double gamma = 0.01;
  double mu = 0.65;
  double n0 = 0.38;
  int t0 = 1960;
  int t1 = 2020;
  double dt = 0.1;
  std::string out;
  std::string config;
};

inline int cmd_growth(const GrowthArgs& a, std::ostream& out) {
  if (a.t1 <= a.t0) throw UsageError("growth: --t1 must be greater than --t0");
  if (!(a.n0 >= 0.0)) throw UsageError("growth: --n0 must be >= 0");
  const GrowthParams p(a.gamma, a.mu);
  const Trajectory traj = integrate(GrowthSystem{p}, FleetState{static_cast<double>(a.t0), a.n0, 0.0},
                                    static_cast<double>(a.t1), a.dt);
  const auto dir = detail::prepare_output_dir(a.out);
  std::ostringstream csv;
  write_fleet_csv(csv, traj);
  detail::write_file(dir / "growth.csv", csv.str());
  out << "growth model gamma=" << format_fixed(p.gamma()) << " mu=" << format_fixed(p.mu())
      << " limit=" << format_fixed(p.limit()) << " Mveh\n"
      << "fleet(" << a.t1 << ") = " << format_fixed(traj.back().x) << " Mveh (closed form "
      << format_fixed(growth_closed_form(p, a.n0, a.t1 - a.t0)) << ")\n"
      << "wrote " << (dir / "growth.csv").string() << '\n';
  return exit_ok;
}

struct ScenarioArgs {
  std::string name;
  std::string config;
  std::string out;
  bool targets = false;
  double gamma_c = 0.0, gamma_h = 0.0, a = 0.0, epsilon = 0.0, mu_c = 0.0, mu_h = 0.0;
  double x0 = scenario_initial_conventional;
  double y0 = 0.0;
  double t0 = scenario_start_year;
  double t_end = scenario_end_year;
  double dt = scenario_dt;
  double output_step = 1.0;
};

/// Builds a spec from a builtin name, overridden by any explicitly set
/// parameter. Without a builtin name all six coefficients are required.
inline ScenarioSpec scenario_from_args(const ScenarioArgs& s, const CLI::App& cmd) {
  const bool builtin = !s.name.empty() && (s.name == "low" || s.name == "moderate" ||
                                           s.name == "aggressive");
  if (!builtin && !s.name.empty() && s.config.empty())
    throw UsageError("unknown scenario '" + s.name + "' (expected low, moderate or aggressive)");
  if (s.name.empty() && s.config.empty())
    throw UsageError("scenario: give --name or --config");

  auto pick = [&](const char* flag, double value, double fallback) {
    return detail::given(cmd, flag) ? value : fallback;
  };
  if (builtin) {
    const ScenarioSpec base = builtin_scenario(s.name);
    const LvmParams& p = base.params();
    const LvmParams params(pick("--gamma_c", s.gamma_c, p.gamma_c()),
                           pick("--gamma_h", s.gamma_h, p.gamma_h()), pick("--a", s.a, p.a()),
                           pick("--epsilon", s.epsilon, p.epsilon()),
                           pick("--mu_c", s.mu_c, p.mu_c()), pick("--mu_h", s.mu_h, p.mu_h()));
    return ScenarioSpec(s.name, params, FleetState{s.t0, s.x0, s.y0}, s.t_end, s.dt);
  }
  for (const char* flag : {"--gamma_c", "--gamma_h", "--a", "--epsilon", "--mu_c", "--mu_h"})
    if (!detail::given(cmd, flag))
      throw UsageError(std::string("scenario: custom scenario needs ") + flag);
  return ScenarioSpec(s.name.empty() ? "custom" : s.name,
                      LvmParams(s.gamma_c, s.gamma_h, s.a, s.epsilon, s.mu_c, s.mu_h),
                      FleetState{s.t0, s.x0, s.y0}, s.t_end, s.dt);
}

inline void report_targets(const std::string& name, const std::vector<TargetCheck>& checks,
                           std::ostream& out) {
  if (checks.empty()) {
    out << "targets: no published targets for scenario '" << name << "'\n";
    return;
  }
  for (const auto& c : checks)
    out << "target " << format_fixed(c.year, 0) << ' ' << to_string(c.metric) << ": expected "
        << format_fixed(100.0 * c.expected, 1) << "% +/- " << format_fixed(100.0 * c.tolerance, 1)
        << "%, observed " << format_fixed(100.0 * c.observed, 1) << "% -> "
        << (c.pass ? "PASS" : "FAIL") << '\n';
}

/// Writes <name>.csv (and <name>_targets.csv when requested) for one run.
inline void emit_scenario(const ScenarioSpec& spec, const Trajectory& traj, bool targets,
                          double output_step, const std::filesystem::path& dir,
                          std::ostream& out) {
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, output_step);
  const auto path = dir / (spec.name() + ".csv");
  detail::write_file(path, csv.str());
  const FleetState end = traj.back();
  out << "scenario " << spec.name() << ": " << format_fixed(spec.initial().t, 0) << " -> "
      << format_fixed(spec.t_end(), 0) << ", final conv=" << format_fixed(end.x)
      << " hydro=" << format_fixed(end.y) << " total=" << format_fixed(end.total()) << '\n';
  for (double year : {2030.0, 2035.0, 2050.0})
    if (traj.covers(year))
      out << "  " << format_fixed(year, 0) << ": conv=" << format_fixed(traj.at(year).x)
          << " hydro=" << format_fixed(traj.at(year).y)
          << " zev_share=" << format_fixed(zev_share(traj, year)) << '\n';
  out << "wrote " << path.string() << '\n';
  if (targets) {
    const auto checks = compare_targets(traj, published_targets(spec.name()));
    report_targets(spec.name(), checks, out);
    std::ostringstream tcsv;
    write_targets_csv(tcsv, checks);
    detail::write_file(dir / (spec.name() + "_targets.csv"), tcsv.str());
  }
}

inline int cmd_scenario(const ScenarioArgs& s, const CLI::App& cmd, std::ostream& out) {
  const ScenarioSpec spec = scenario_from_args(s, cmd);
  const Trajectory traj = run_scenario(spec);
  const auto dir = detail::prepare_output_dir(s.out);
  emit_scenario(spec, traj, s.targets, s.output_step, dir, out);
  return exit_ok;
}

struct FitArgs {
  std::string data;
  std::string out;
  std::string config;
};

inline int cmd_fit(const FitArgs& f, std::ostream& out, std::ostream& err) {
  const std::string path = f.data.empty() ? detail::default_data_path() : f.data;
  const FleetSeries series = load_fleet_csv(path);
  try {
    const FitResult fit = fit_growth(series);
    const auto dir = detail::prepare_output_dir(f.out);
    std::ostringstream csv;
    csv << "year,data_mveh,model_mveh,error\n";
    for (const auto& o : series) {
      const double model =
          growth_closed_form(fit.params, fit.n0, static_cast<double>(o.year - fit.anchor_year));
      csv << o.year << ',' << format_fixed(o.fleet) << ',' << format_fixed(model) << ','
          << format_fixed(pointwise_error(o.fleet, model)) << '\n';
    }
    detail::write_file(dir / "fit.csv", csv.str());
    out << "fit of " << series.size() << " points from " << path << '\n'
        << "  gamma = " << format_fixed(fit.params.gamma()) << " 1/year\n"
        << "  mu    = " << format_fixed(fit.params.mu()) << " Mveh/year\n"
        << "  n0    = " << format_fixed(fit.n0) << " Mveh at " << fit.anchor_year << '\n'
        << "  limit = " << format_fixed(fit.params.limit()) << " Mveh\n"
        << "  error = " << format_fixed(fit.mean_error) << " +/- " << format_fixed(fit.std_error)
        << " (mean +/- std of point-wise relative error)\n"
        << "  ssr   = " << format_fixed(fit.ssr) << " after " << fit.iterations << " iterations\n"
        << "wrote " << (dir / "fit.csv").string() << '\n';
    return exit_ok;
  } catch (const FitError& e) {
    const auto& b = e.best();
    err << "error: " << e.what() << '\n'
        << "  best iterate: gamma=" << format_fixed(b.gamma) << " mu=" << format_fixed(b.mu)
        << " n0=" << format_fixed(b.n0) << " ssr=" << format_fixed(b.ssr) << " after "
        << b.iterations << " iterations\n";
    return exit_failure;
  }
}

struct SensitivityArgs {
  double mu_h = 0.65, mu_c = 0.65, epsilon = 0.01, a = 0.01, gamma_h = 0.01, gamma_c = 0.01;
  std::string out;
  std::string config;
};

inline int cmd_sensitivity(const SensitivityArgs& s, std::ostream& out, std::ostream& err) {
  const LvmParams p(s.gamma_c, s.gamma_h, s.a, s.epsilon, s.mu_c, s.mu_h);
  const double delta = discriminant(p);
  StabilityClass cls{};
  try {
    cls = classify_stability(p);
  } catch (const DegenerateError& e) {
    err << "error: Delta = " << delta << ": " << e.what() << '\n';
    return exit_failure;
  }
  if (cls == StabilityClass::Oscillatory) {
    err << "error: Delta = " << delta
        << " < 0: oscillatory regime, no asymptotic state or gradients\n";
    return exit_failure;
  }
  const Equilibrium eq = asymptotic_state(p);
  const SensitivityPair g = sensitivity(p);
  const auto dir = detail::prepare_output_dir(s.out);
  std::ostringstream csv;
  write_gradients_csv(csv, g);
  detail::write_file(dir / "gradients.csv", csv.str());
  out << "Delta     = " << delta << '\n'
      << "stability = " << to_string(cls) << '\n'
      << "x_inf     = " << format_fixed(eq.x_inf) << " Mveh (conventional)\n"
      << "y_inf     = " << format_fixed(eq.y_inf) << " Mveh (hydrogen)\n"
      << "total     = " << format_fixed(eq.total()) << " Mveh\n"
      << "wrote " << (dir / "gradients.csv").string() << '\n';
  return exit_ok;
}

struct InfraArgs {
  std::string id;
  double uptake = 0.35;
  int horizon = 30;
  std::string model = "daily";
  double utilization = 1.0;
  double petrol = 5e6;
  std::string out;
  std::string config;
};

inline int cmd_infra(const InfraArgs& a, std::ostream& out) {
  if (a.id.empty()) throw UsageError("infra: --id is required (S1, S2, S3 or S4)");
  const DeploymentId id = parse_deployment_id(a.id);
  PlanOptions opt;
  if (a.model == "daily")
    opt.model = CapacityModel::DailyFill;
  else if (a.model == "annual")
    opt.model = CapacityModel::AnnualConsumption;
  else
    throw UsageError("infra: --model must be 'daily' or 'annual'");
  opt.utilization = a.utilization;
  const DeploymentPlan plan = deployment_plan(id, a.uptake, a.horizon, opt);
  const PetrolEquivalence petrol = petrol_equivalence(
      static_cast<double>(plan.total_stations), deployment_archetypes(id).first, a.petrol);
  const auto dir = detail::prepare_output_dir(a.out);
  std::ostringstream csv;
  write_plan_csv(csv, {plan});
  const auto path = dir / ("infra_" + std::string(to_string(id)) + ".csv");
  detail::write_file(path, csv.str());
  write_plan_text(out, plan, petrol);
  out << "wrote " << path.string() << '\n';
  return exit_ok;
}

struct BatchArgs {
  std::vector<std::string> names;
  unsigned threads = 0;
  bool targets = false;
  std::string out;
  std::string config;
};

inline int cmd_batch(const BatchArgs& b, std::ostream& out) {
  std::vector<ScenarioSpec> specs;
  for (const auto& n : b.names.empty() ? builtin_scenario_names() : b.names)
    specs.push_back(builtin_scenario(n));
  const auto trajectories = run_batch(specs, b.threads);
  const auto dir = detail::prepare_output_dir(b.out);
  for (std::size_t i = 0; i < specs.size(); ++i)
    emit_scenario(specs[i], trajectories[i], b.targets, 1.0, dir, out);
  return exit_ok;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fleetdyn: conventional vs hydrogen fleet forecasting", "fleetdyn"};
  app.require_subcommand(1);

  GrowthArgs growth;
  auto* g = app.add_subcommand("growth", "integrate the first-order growth model, write growth.csv");
  g->add_option("--gamma", growth.gamma, "decay rate, 1/year (> 0)")->capture_default_str();
  g->add_option("--mu", growth.mu, "resource inflow, Mveh/year")->capture_default_str();
  g->add_option("--n0", growth.n0, "fleet at t0, Mveh")->capture_default_str();
  g->add_option("--t0", growth.t0, "start year")->capture_default_str();
  g->add_option("--t1", growth.t1, "end year")->capture_default_str();
  g->add_option("--dt", growth.dt, "RK4 step, years")->capture_default_str();
  g->add_option("--out", growth.out, "output directory (default $FLEETDYN_OUT or ./out)");
  g->add_option("--config", growth.config, "key = value file");

  ScenarioArgs scen;
  auto* s = app.add_subcommand("scenario", "run a policy scenario, write <name>.csv");
  s->add_option("--name", scen.name, "low, moderate, aggressive (or a label for --config)");
  s->add_option("--config", scen.config, "key = value file");
  s->add_flag("--targets", scen.targets, "check published 2050 zero-emission shares");
  s->add_option("--gamma_c", scen.gamma_c, "conventional decay rate, 1/year");
  s->add_option("--gamma_h", scen.gamma_h, "hydrogen decay rate, 1/year");
  s->add_option("--a", scen.a, "attack rate, 1/(Mveh year)");
  s->add_option("--epsilon", scen.epsilon, "efficiency, 1/(Mveh year)");
  s->add_option("--mu_c", scen.mu_c, "conventional resource, Mveh/year");
  s->add_option("--mu_h", scen.mu_h, "hydrogen resource, Mveh/year");
  s->add_option("--x0", scen.x0, "initial conventional fleet, Mveh")->capture_default_str();
  s->add_option("--y0", scen.y0, "initial hydrogen fleet, Mveh")->capture_default_str();
  s->add_option("--t0", scen.t0, "start year")->capture_default_str();
  s->add_option("--t_end", scen.t_end, "end year")->capture_default_str();
  s->add_option("--dt", scen.dt, "RK4 step, years")->capture_default_str();
  s->add_option("--output_step", scen.output_step, "CSV row spacing, years")->capture_default_str();
  s->add_option("--out", scen.out, "output directory");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "fit the growth model to a year,fleet_mveh CSV");
  f->add_option("--data", fit.data, "data CSV (default: bundled RAC series)");
  f->add_option("--out", fit.out, "output directory");
  f->add_option("--config", fit.config, "key = value file");

  SensitivityArgs sens;
  auto* se = app.add_subcommand("sensitivity", "equilibrium, stability and gradients, write gradients.csv");
  se->add_option("--mu_h", sens.mu_h)->capture_default_str();
  se->add_option("--mu_c", sens.mu_c)->capture_default_str();
  se->add_option("--epsilon", sens.epsilon)->capture_default_str();
  se->add_option("--a", sens.a)->capture_default_str();
  se->add_option("--gamma_h", sens.gamma_h)->capture_default_str();
  se->add_option("--gamma_c", sens.gamma_c)->capture_default_str();
  se->add_option("--out", sens.out, "output directory");
  se->add_option("--config", sens.config, "key = value file");

  InfraArgs infra;
  auto* in = app.add_subcommand("infra", "refuelling-station deployment plan S1-S4");
  in->add_option("--id", infra.id, "S1, S2, S3 or S4");
  in->add_option("--uptake", infra.uptake, "new hydrogen vehicles, Mveh/year")->capture_default_str();
  in->add_option("--horizon", infra.horizon, "build-out years")->capture_default_str();
  in->add_option("--model", infra.model, "daily (default) or annual capacity model")->capture_default_str();
  in->add_option("--utilization", infra.utilization, "station utilisation in (0, 1]")->capture_default_str();
  in->add_option("--petrol", infra.petrol, "filling-station throughput, kg/year")->capture_default_str();
  in->add_option("--out", infra.out, "output directory");
  in->add_option("--config", infra.config, "key = value file");

  BatchArgs batch;
  auto* b = app.add_subcommand("batch", "run several builtin scenarios");
  b->add_option("--names", batch.names, "scenario names (default: all)")->delimiter(',');
  b->add_option("--threads", batch.threads, "worker threads, 0 = hardware")->capture_default_str();
  b->add_flag("--targets", batch.targets, "check published targets");
  b->add_option("--out", batch.out, "output directory");
  b->add_option("--config", batch.config, "key = value file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends report exit code 0.
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? exit_ok : exit_usage;
  }

  try {
    if (g->parsed()) {
      detail::apply_config(*g, growth.config);
      return cmd_growth(growth, out);
    }
    if (s->parsed()) {
      detail::apply_config(*s, scen.config);
      return cmd_scenario(scen, *s, out);
    }
    if (f->parsed()) {
      detail::apply_config(*f, fit.config);
      return cmd_fit(fit, out, err);
    }
    if (se->parsed()) {
      detail::apply_config(*se, sens.config);
      return cmd_sensitivity(sens, out, err);
    }
    if (in->parsed()) {
      detail::apply_config(*in, infra.config);
      return cmd_infra(infra, out);
    }
    if (b->parsed()) {
      detail::apply_config(*b, batch.config);
      return cmd_batch(batch, out);
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
  err << "error: no command\n";
  return exit_usage;
}

}  // namespace fleetdyn::cli
