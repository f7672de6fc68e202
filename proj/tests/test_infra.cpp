#include <gtest/gtest.h>

#include "fleetdyn/infra.hpp"

using namespace fleetdyn;

TEST(Specs, CatalogueValues) {
  EXPECT_EQ(small_station().capacity_per_year(), 73000.0);
  EXPECT_EQ(large_station().capacity_per_year(), 365000.0);
  EXPECT_EQ(hfc_vehicle().annual_consumption(), 260.0);
  EXPECT_EQ(hfcre_vehicle().annual_consumption(), 78.0);
  EXPECT_THROW(VehicleSpec(VehicleKind::HFC, 0.0), InvalidArgument);
  EXPECT_THROW(StationSpec(StationKind::Small, 200.0, 0.0), InvalidArgument);
}

TEST(VehiclesPerStation, DailyFill) {
  EXPECT_EQ(vehicles_per_station(small_station(), hfc_vehicle()).floor, 40);
  EXPECT_EQ(vehicles_per_station(small_station(), hfcre_vehicle()).floor, 133);
  const auto large = vehicles_per_station(large_station(), hfcre_vehicle());
  EXPECT_EQ(large.floor, 666);
  EXPECT_EQ(large.nearest, 667);
  EXPECT_NEAR(large.raw, 666.6666666667, 1e-9);
  EXPECT_EQ(vehicles_per_station(large_station(), hfc_vehicle()).nearest, 200);
}

TEST(VehiclesPerStation, AnnualModelScalesBy365Over52) {
  const auto daily = vehicles_per_station(small_station(), hfc_vehicle());
  const auto annual =
      vehicles_per_station(small_station(), hfc_vehicle(), CapacityModel::AnnualConsumption);
  EXPECT_NEAR(annual.raw / daily.raw, 365.0 / 52.0, 1e-12);
  EXPECT_EQ(annual.floor, 280);
}

TEST(VehiclesPerStation, Utilization) {
  EXPECT_EQ(vehicles_per_station(small_station(), hfc_vehicle(), CapacityModel::DailyFill, 0.5).floor, 20);
  EXPECT_THROW(vehicles_per_station(small_station(), hfc_vehicle(), CapacityModel::DailyFill, 0.0),
               InvalidArgument);
  EXPECT_THROW(vehicles_per_station(small_station(), hfc_vehicle(), CapacityModel::DailyFill, 1.5),
               InvalidArgument);
}

TEST(StationsPerYear, Examples) {
  EXPECT_EQ(stations_per_year(0.35, 40), 8750);
  EXPECT_EQ(stations_per_year(0.35, 133), 2632);
  EXPECT_NEAR(0.35e6 / (200.0 / 1.5), 2625.0, 1e-9);
  EXPECT_EQ(stations_per_year(0.35, 667), 525);
  EXPECT_EQ(stations_per_year(0.35, 200), 1750);
  EXPECT_THROW(stations_per_year(0.35, 0), InvalidArgument);
}

TEST(StationsPerYear, CoverageAndLinearity) {
  for (long vps : {7L, 40L, 133L, 200L, 666L, 667L, 1001L})
    for (double uptake : {0.01, 0.05, 0.35, 0.65, 1.234567}) {
      const long n = stations_per_year(uptake, vps);
      EXPECT_GE(static_cast<double>(n * vps), uptake * 1e6 - 1e-6) << vps << ' ' << uptake;
      EXPECT_LT(static_cast<double>((n - 1) * vps), uptake * 1e6) << vps << ' ' << uptake;
      const long d = stations_per_year(2.0 * uptake, vps);
      EXPECT_LE(std::abs(d - 2 * n), 1);
    }
}

TEST(DeploymentPlan, PublishedScenarios) {
  const DeploymentPlan s1 = deployment_plan(DeploymentId::S1, 0.35, 30);
  EXPECT_EQ(s1.stations_per_year, 8750);
  EXPECT_EQ(s1.total_stations, 262500);
  EXPECT_DOUBLE_EQ(s1.annual_capex, 8.75e9);
  EXPECT_DOUBLE_EQ(s1.total_capex, 8.75e9 * 30);

  const DeploymentPlan s2 = deployment_plan(DeploymentId::S2, 0.35, 30);
  EXPECT_EQ(s2.vps.nearest, 133);
  EXPECT_EQ(s2.stations_per_year, 2632);
  EXPECT_NEAR(s2.stations_per_year_raw, 2625.0, 1e-9);
  EXPECT_EQ(s2.total_stations, 78960);

  const DeploymentPlan s3 = deployment_plan(DeploymentId::S3, 0.35, 30);
  EXPECT_EQ(s3.vps.nearest, 200);
  EXPECT_EQ(s3.stations_per_year, 1750);
  EXPECT_EQ(s3.total_stations, 52500);

  const DeploymentPlan s4 = deployment_plan(DeploymentId::S4, 0.35, 30);
  EXPECT_EQ(s4.stations_per_year, 525);
  EXPECT_EQ(s4.total_stations, 15750);
  EXPECT_DOUBLE_EQ(s4.annual_capex, 2.625e9);
}

TEST(DeploymentPlan, Invariants) {
  for (auto id : {DeploymentId::S1, DeploymentId::S2, DeploymentId::S3, DeploymentId::S4})
    for (double uptake : {0.05, 0.35, 0.7})
      for (int horizon : {1, 10, 30}) {
        const DeploymentPlan p = deployment_plan(id, uptake, horizon);
        const StationSpec st = deployment_archetypes(id).first;
        EXPECT_EQ(p.total_stations, p.stations_per_year * horizon);
        EXPECT_DOUBLE_EQ(p.annual_capex, static_cast<double>(p.stations_per_year) * st.capex());
        EXPECT_GE(static_cast<double>(p.vps.nearest * p.stations_per_year), uptake * 1e6 - 1e-6);
      }
}

TEST(DeploymentPlan, CostOrdering) {
  for (double uptake : {0.05, 0.35, 0.7}) {
    auto plan = [&](DeploymentId id) { return deployment_plan(id, uptake, 30); };
    const auto s1 = plan(DeploymentId::S1), s2 = plan(DeploymentId::S2);
    const auto s3 = plan(DeploymentId::S3), s4 = plan(DeploymentId::S4);
    EXPECT_NEAR(s1.annual_capex_raw, s3.annual_capex_raw, 1e-6 * s1.annual_capex_raw);
    EXPECT_NEAR(s2.annual_capex_raw, s4.annual_capex_raw, 1e-6 * s2.annual_capex_raw);
    // Rounding 133.33 to 133 vehicles/station costs at most 0.3 %.
    EXPECT_NEAR(s1.annual_capex, s3.annual_capex, 5e6 + 1e6);
    EXPECT_NEAR(s2.annual_capex, s4.annual_capex, 0.003 * s4.annual_capex + 5e6);
    EXPECT_LT(s2.annual_capex, s1.annual_capex);
    EXPECT_LT(s4.annual_capex, s3.annual_capex);
  }
}

TEST(DeploymentPlan, Linearity) {
  const auto a = deployment_plan(DeploymentId::S2, 0.35, 30);
  const auto b = deployment_plan(DeploymentId::S2, 0.70, 30);
  EXPECT_LE(std::abs(b.stations_per_year - 2 * a.stations_per_year), 1);
}

TEST(DeploymentPlan, Errors) {
  EXPECT_THROW(deployment_plan(DeploymentId::S1, 0.0, 30), InvalidArgument);
  EXPECT_THROW(deployment_plan(DeploymentId::S1, 0.35, 0), InvalidArgument);
  EXPECT_THROW(parse_deployment_id("S5"), InvalidArgument);
  EXPECT_EQ(parse_deployment_id("s3"), DeploymentId::S3);
}

TEST(PetrolEquivalence, Examples) {
  const auto e = petrol_equivalence(20010.0, large_station(), 5e6);
  EXPECT_NEAR(e.ratio, 13.69863, 1e-5);
  EXPECT_EQ(e.ratio_rounded, 14.0);
  EXPECT_NEAR(e.stations_at_rounded, 1429.29, 0.01);
  EXPECT_NEAR(e.stations, 20010.0 / e.ratio, 1e-9);
  EXPECT_EQ(petrol_equivalence(0.0, large_station(), 5e6).stations, 0.0);
  EXPECT_THROW(petrol_equivalence(1.0, large_station(), 0.0), InvalidArgument);
}
