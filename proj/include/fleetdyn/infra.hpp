#pragma once

// Hydrogen refuelling station (HRS) sizing and cost planning.

#include <algorithm>
#include <cmath>
#include <utility>
#include <string>
#include <string_view>

#include "fleetdyn/dynamics.hpp"
#include "fleetdyn/error.hpp"

namespace fleetdyn {

enum class StationKind { Small, Large };
enum class VehicleKind { HFC, HFCRE };

inline std::string_view to_string(StationKind k) { return k == StationKind::Small ? "small" : "large"; }
inline std::string_view to_string(VehicleKind k) { return k == VehicleKind::HFC ? "HFC" : "HFCRE"; }

inline constexpr double days_per_year = 365.0;
inline constexpr double refuels_per_year = 52.0;  // once a week

class StationSpec {
 public:
  StationSpec(StationKind kind, double capacity_per_day, double capex)
      : kind_(kind), capacity_per_day_(capacity_per_day), capex_(capex) {
    detail::require(detail::finite_positive(capacity_per_day), "station: capacity must be > 0");
    detail::require(detail::finite_positive(capex), "station: capex must be > 0");
  }

  StationKind kind() const noexcept { return kind_; }
  double capacity_per_day() const noexcept { return capacity_per_day_; }      ///< kg/day
  double capacity_per_year() const noexcept { return days_per_year * capacity_per_day_; }
  double capex() const noexcept { return capex_; }  ///< GBP per station

 private:
  StationKind kind_;
  double capacity_per_day_;
  double capex_;
};

class VehicleSpec {
 public:
  VehicleSpec(VehicleKind kind, double tank) : kind_(kind), tank_(tank) {
    detail::require(detail::finite_positive(tank), "vehicle: tank must be > 0");
  }

  VehicleKind kind() const noexcept { return kind_; }
  double tank() const noexcept { return tank_; }  ///< kg
  double annual_consumption() const noexcept { return refuels_per_year * tank_; }

 private:
  VehicleKind kind_;
  double tank_;
};

/// Solar electrolysis, 200 kg/day, about GBP 1M.
inline StationSpec small_station() { return {StationKind::Small, 200.0, 1e6}; }
/// Steam methane reforming, 1000 kg/day, about GBP 5M.
inline StationSpec large_station() { return {StationKind::Large, 1000.0, 5e6}; }
inline VehicleSpec hfc_vehicle() { return {VehicleKind::HFC, 5.0}; }
inline VehicleSpec hfcre_vehicle() { return {VehicleKind::HFCRE, 1.5}; }

/// DailyFill: each vehicle takes a full tank per station-day (the default,
/// which reproduces the published station counts). AnnualConsumption: station
/// yearly output over vehicle yearly use; exposed for sensitivity only.
enum class CapacityModel { DailyFill, AnnualConsumption };

inline std::string_view to_string(CapacityModel m) {
  return m == CapacityModel::DailyFill ? "daily-fill" : "annual-consumption";
}

struct VehiclesPerStation {
  double raw = 0.0;
  long floor = 0;
  long nearest = 0;
};

inline VehiclesPerStation vehicles_per_station(const StationSpec& st, const VehicleSpec& v,
                                               CapacityModel model = CapacityModel::DailyFill,
                                               double utilization = 1.0) {
  detail::require(utilization > 0.0 && utilization <= 1.0,
                  "vehicles_per_station: utilization must be in (0, 1]");
  const double raw = model == CapacityModel::DailyFill
                         ? utilization * st.capacity_per_day() / v.tank()
                         : utilization * st.capacity_per_year() / v.annual_consumption();
  return {raw, static_cast<long>(std::floor(raw)), std::lround(raw)};
}

/// Stations needed per year to absorb `uptake` Mveh/year, rounded up.
inline long stations_per_year(double uptake, long vps) {
  detail::require(vps > 0, "stations_per_year: vehicles per station must be > 0");
  detail::require(detail::finite_non_negative(uptake), "stations_per_year: uptake must be >= 0");
  const double need = uptake * vehicles_per_mveh / static_cast<double>(vps);
  // Absorb representation error so exact quotients such as 8750 stay exact.
  return static_cast<long>(std::ceil(need * (1.0 - 1e-12)));
}

enum class DeploymentId { S1, S2, S3, S4 };

inline std::string_view to_string(DeploymentId id) {
  switch (id) {
    case DeploymentId::S1: return "S1";
    case DeploymentId::S2: return "S2";
    case DeploymentId::S3: return "S3";
    case DeploymentId::S4: return "S4";
  }
  return "?";
}

inline DeploymentId parse_deployment_id(std::string_view s) {
  if (s == "S1" || s == "s1") return DeploymentId::S1;
  if (s == "S2" || s == "s2") return DeploymentId::S2;
  if (s == "S3" || s == "s3") return DeploymentId::S3;
  if (s == "S4" || s == "s4") return DeploymentId::S4;
  throw InvalidArgument("unknown deployment scenario '" + std::string(s) +
                        "' (expected S1, S2, S3 or S4)");
}

/// Station and vehicle archetypes bound to each deployment scenario.
inline std::pair<StationSpec, VehicleSpec> deployment_archetypes(DeploymentId id) {
  switch (id) {
    case DeploymentId::S1: return {small_station(), hfc_vehicle()};
    case DeploymentId::S2: return {small_station(), hfcre_vehicle()};
    case DeploymentId::S3: return {large_station(), hfc_vehicle()};
    case DeploymentId::S4: return {large_station(), hfcre_vehicle()};
  }
  throw InvalidArgument("unknown deployment scenario");
}

struct PlanOptions {
  CapacityModel model = CapacityModel::DailyFill;
  double utilization = 1.0;
};

struct DeploymentPlan {
  DeploymentId scenario_id = DeploymentId::S1;
  StationKind station = StationKind::Small;
  VehicleKind vehicle = VehicleKind::HFC;
  CapacityModel model = CapacityModel::DailyFill;
  double uptake = 0.0;    ///< Mveh/year
  int horizon_years = 0;
  VehiclesPerStation vps;  ///< counts use vps.nearest
  long stations_per_year = 0;
  long total_stations = 0;
  double annual_capex = 0.0;  ///< GBP/year
  double total_capex = 0.0;   ///< GBP
  double stations_per_year_raw = 0.0;  ///< uptake / unrounded vps
  double annual_capex_raw = 0.0;
};

/// Station build-out absorbing `uptake` Mveh/year for `horizon_years`.
/// Station counts use vehicles/station rounded to nearest and are then
/// rounded up; the unrounded figures are carried alongside.
inline DeploymentPlan deployment_plan(DeploymentId id, double uptake, int horizon_years,
                                      const PlanOptions& opt = {}) {
  detail::require(detail::finite_positive(uptake), "deployment_plan: uptake must be > 0");
  detail::require(horizon_years > 0, "deployment_plan: horizon must be > 0 years");
  const auto [st, v] = deployment_archetypes(id);
  DeploymentPlan p;
  p.scenario_id = id;
  p.station = st.kind();
  p.vehicle = v.kind();
  p.model = opt.model;
  p.uptake = uptake;
  p.horizon_years = horizon_years;
  p.vps = vehicles_per_station(st, v, opt.model, opt.utilization);
  if (p.vps.nearest <= 0)
    throw InvalidArgument("deployment_plan: station supports no vehicles");
  p.stations_per_year = stations_per_year(uptake, p.vps.nearest);
  p.total_stations = p.stations_per_year * horizon_years;
  p.annual_capex = static_cast<double>(p.stations_per_year) * st.capex();
  p.total_capex = p.annual_capex * horizon_years;
  p.stations_per_year_raw = uptake * vehicles_per_mveh / p.vps.raw;
  p.annual_capex_raw = p.stations_per_year_raw * st.capex();
  return p;
}

struct PetrolEquivalence {
  double ratio = 0.0;             ///< petrol throughput / station yearly output
  double stations = 0.0;          ///< equivalent filling stations, exact ratio
  double ratio_rounded = 0.0;     ///< ratio rounded to an integer
  double stations_at_rounded = 0.0;
};

/// Number of conventional filling stations delivering the same fuel mass as
/// `total_stations` hydrogen stations.
inline PetrolEquivalence petrol_equivalence(double total_stations, const StationSpec& st,
                                            double petrol_throughput) {
  detail::require(detail::finite_positive(petrol_throughput),
                  "petrol_equivalence: throughput must be > 0");
  detail::require(detail::finite_non_negative(total_stations),
                  "petrol_equivalence: station count must be >= 0");
  PetrolEquivalence e;
  e.ratio = petrol_throughput / st.capacity_per_year();
  e.stations = total_stations * st.capacity_per_year() / petrol_throughput;
  e.ratio_rounded = std::max(1.0, std::round(e.ratio));
  e.stations_at_rounded = total_stations / e.ratio_rounded;
  return e;
}

}  // namespace fleetdyn
