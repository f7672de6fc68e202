#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fleetdyn/analytics.hpp"

using namespace fleetdyn;

namespace {

// Gradient-figure parameters: every rate 0.01, both resources 0.65.
const LvmParams grad_params{0.01, 0.01, 0.01, 0.01, 0.65, 0.65};
const LvmParams moderate{0.01, 0.01, 0.005, 0.005, 0.65, 0.35};

LvmParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lr(std::log(1e-3), 0.0), lm(std::log(0.01), 0.0);
  auto rate = [&] { return std::exp(lr(rng)); };
  auto res = [&] { return std::exp(lm(rng)); };
  const double gc = rate(), gh = rate(), a = rate(), e = rate();
  return LvmParams{gc, gh, a, e, res(), res()};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Discriminant, Examples) {
  EXPECT_NEAR(discriminant(grad_params), 1.6901e-4, 1e-16);
  EXPECT_NEAR(discriminant(moderate), 2.471e-5, 1e-17);
  const LvmParams no_source{0.3, 0.7, 0.5, 0.9, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(discriminant(no_source), 0.3 * 0.3 * 0.7 * 0.7);
}

TEST(Discriminant, IsACompletedSquareForValidParams) {
  // Delta = (a mu_h + eps mu_c - g_c g_h)^2 + 4 a g_c g_h mu_h >= 0.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const LvmParams p = random_params(rng);
    const double b = p.a() * p.mu_h() + p.epsilon() * p.mu_c() - p.gamma_c() * p.gamma_h();
    const double square = b * b + 4.0 * p.a() * p.gamma_c() * p.gamma_h() * p.mu_h();
    EXPECT_NEAR(discriminant(p), square, 1e-12 * std::max(square, 1e-20));
    EXPECT_GE(discriminant(p), 0.0);
  }
}

TEST(Discriminant, NonDecreasingInMuHAndA) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const LvmParams p = random_params(rng);
    EXPECT_LE(discriminant(p), discriminant(p.with_mu_h(p.mu_h() * 1.5)));
    EXPECT_LE(discriminant(p), discriminant(p.with_a(p.a() * 1.5)));
  }
}

TEST(Stability, BuiltinScenarioParametersAreMonotone) {
  for (double c : {0.001, 0.005, 0.01})
    for (double mu_h : {0.05, 0.35, 0.65})
      EXPECT_EQ(classify_stability({0.01, 0.01, c, c, 0.65, mu_h}),
                StabilityClass::MonotoneEquilibrium);
}

TEST(Stability, ZeroDiscriminantIsDegenerate) {
  // mu_h = 0 and eps mu_c = g_c g_h: Delta = (eps mu_c - g_c g_h)^2 = 0.
  const LvmParams p{1.0, 1.0, 0.37, 1.0, 1.0, 0.0};
  EXPECT_EQ(discriminant(p), 0.0);
  EXPECT_THROW(classify_stability(p), DegenerateError);
  EXPECT_THROW(asymptotic_state(p), NoFixedPointError);
  EXPECT_THROW(sensitivity_hydrogen(p), NoFixedPointError);
  // Moving eps off the boundary gives Delta = 0.01 > 0, not an oscillation.
  EXPECT_NEAR(discriminant(p.with_epsilon(0.9)), 0.01, 1e-15);
  EXPECT_EQ(classify_stability(p.with_epsilon(0.9)), StabilityClass::MonotoneEquilibrium);
}

TEST(Stability, RawDiscriminantClassification) {
  EXPECT_EQ(classify_discriminant(1e-6, 1.0), StabilityClass::MonotoneEquilibrium);
  EXPECT_EQ(classify_discriminant(-1e-6, 1.0), StabilityClass::Oscillatory);
  EXPECT_THROW(classify_discriminant(1e-13, 1.0), DegenerateError);
  EXPECT_THROW(classify_discriminant(0.0, 0.0), DegenerateError);
}

TEST(AsymptoticState, GradientFigureParameters) {
  const Equilibrium eq = asymptotic_state(grad_params);
  EXPECT_NEAR(eq.x_inf, 0.498076951523965, 1e-12);
  EXPECT_NEAR(eq.y_inf, 129.501923048476, 1e-10);
  EXPECT_NEAR(eq.total(), 130.0, 130.0 * 1e-12);
  EXPECT_NEAR(eq.delta, 1.6901e-4, 1e-16);
}

TEST(AsymptoticState, ModerateScenario) {
  const Equilibrium eq = asymptotic_state(moderate);
  EXPECT_NEAR(eq.x_inf, 1.290845913453727, 1e-12);
  EXPECT_NEAR(eq.y_inf, 98.709154086546273, 1e-10);
  EXPECT_NEAR(eq.total(), 100.0, 1e-10);
}

TEST(AsymptoticState, PrintedClosedFormsAgree) {
  // The printed (b -/+ sqrt D) forms and the conjugate forms used internally.
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const LvmParams p = random_params(rng);
    const double a = p.a(), e = p.epsilon(), gc = p.gamma_c(), gh = p.gamma_h();
    const double sd = std::sqrt(discriminant(p));
    const double x = (a * p.mu_h() + e * p.mu_c() + gc * gh - sd) / (2 * e * gc);
    const double y = (a * p.mu_h() + e * p.mu_c() - gc * gh + sd) / (2 * a * gh);
    const Equilibrium eq = asymptotic_state(p);
    EXPECT_NEAR(eq.x_inf, x, 1e-7 * std::max(1.0, std::abs(x)));
    EXPECT_NEAR(eq.y_inf, y, 1e-7 * std::max(1.0, std::abs(y)));
  }
}

TEST(AsymptoticState, IsAFixedPointAndNonNegative) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const LvmParams p = random_params(rng);
    const Equilibrium eq = asymptotic_state(p);
    ASSERT_GE(eq.x_inf, 0.0);
    ASSERT_GE(eq.y_inf, 0.0);
    const Derivative d = rhs_modified({0, eq.x_inf, eq.y_inf}, p);
    const double scale = p.mu_c() + p.mu_h();
    EXPECT_LT(std::abs(d.dx), 1e-9 * scale);
    EXPECT_LT(std::abs(d.dy), 1e-9 * scale);
  }
}

TEST(AsymptoticState, SymmetricSumRule) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 200; ++i) {
    const LvmParams r = random_params(rng);
    const LvmParams p{r.gamma_c(), r.gamma_c(), r.a(), r.a(), r.mu_c(), r.mu_h()};
    const double expected = (p.mu_c() + p.mu_h()) / p.gamma_c();
    EXPECT_NEAR(asymptotic_state(p).total(), expected, 1e-12 * expected);
  }
}

TEST(AsymptoticState, ZeroSources) {
  const Equilibrium eq = asymptotic_state(grad_params.with_mu_c(0.0).with_mu_h(0.0));
  EXPECT_EQ(eq.x_inf, 0.0);
  EXPECT_EQ(eq.y_inf, 0.0);
}

TEST(AsymptoticState, LongTimeIntegrationLandsOnIt) {
  for (double c : {0.001, 0.005, 0.01})
    for (double mu_h : {0.05, 0.35, 0.65}) {
      const LvmParams p{0.01, 0.01, c, c, 0.65, mu_h};
      const Equilibrium eq = asymptotic_state(p);
      for (const FleetState s0 : {FleetState{0, 28.95, 0.0}, FleetState{0, 0.0, 0.0},
                                  FleetState{0, 80.0, 40.0}}) {
        const FleetState end = integrate(ModifiedSystem{p}, s0, 5000.0, 0.1).back();
        EXPECT_NEAR(end.x, eq.x_inf, 1e-6) << "c=" << c << " mu_h=" << mu_h;
        EXPECT_NEAR(end.y, eq.y_inf, 1e-6) << "c=" << c << " mu_h=" << mu_h;
      }
    }
}

TEST(Sensitivity, GradientFigureValues) {
  // Reference values from symbolic differentiation of the closed forms.
  const SensitivityVector h = sensitivity_hydrogen(grad_params);
  EXPECT_NEAR(h.d_mu_h, 100.38312478167187, 1e-8);
  EXPECT_NEAR(h.d_mu_c, 99.61391676973795, 1e-8);
  EXPECT_NEAR(h.d_epsilon, 6474.904590032967, 1e-6);
  EXPECT_NEAR(h.d_a, -6425.2891940389345, 1e-6);
  EXPECT_NEAR(h.d_gamma_h, -12999.80770084164, 1e-6);
  EXPECT_NEAR(h.d_gamma_c, -49.615395994033044, 1e-8);

  const SensitivityVector c = sensitivity_conventional(grad_params);
  EXPECT_NEAR(c.d_mu_h, -0.3831247816718598, 1e-10);
  EXPECT_NEAR(c.d_mu_c, 0.38608323026206376, 1e-10);
  EXPECT_NEAR(c.d_epsilon, -24.712285185362695, 1e-8);
  EXPECT_NEAR(c.d_a, -24.90311080867089, 1e-8);
  EXPECT_NEAR(c.d_gamma_h, 49.615395994033044, 1e-8);
  EXPECT_NEAR(c.d_gamma_c, -0.1922991583639423, 1e-10);
}

TEST(ClosedFormSensitivity, AgreesWithImplicitForm) {
  for (const LvmParams& p : {grad_params, moderate, LvmParams{0.01, 0.01, 0.001, 0.001, 0.65, 0.05},
                             LvmParams{0.3, 0.7, 0.5, 0.9, 0.2, 0.4}}) {
    const auto h = closed_form_sensitivity_hydrogen(p).values(), hi = sensitivity_hydrogen(p).values();
    const auto c = closed_form_sensitivity_conventional(p).values(),
               ci = sensitivity_conventional(p).values();
    for (std::size_t k = 0; k < 6; ++k) {
      EXPECT_LT(rel_err(h[k], hi[k]), 1e-10) << SensitivityVector::names[k];
      EXPECT_LT(rel_err(c[k], ci[k]), 1e-10) << SensitivityVector::names[k];
    }
  }
  EXPECT_THROW(closed_form_sensitivity_hydrogen(LvmParams{0.01, 0.01, 0.01, 0.01, 0.01, 0.0}),
               NoFixedPointError);
}

TEST(ClosedFormSensitivity, CancellationIsBoundedButReal) {
  // Term-by-term evaluation subtracts nearly equal numbers. A 60-digit
  // reference put the worst loss over 400 random samples at 6.8e-4 relative
  // (d x_inf / d gamma_c); the implicit form stayed within 1e-14.
  std::mt19937_64 rng(41);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const LvmParams p = random_params(rng);
    const auto c = closed_form_sensitivity_conventional(p).values(),
               ci = sensitivity_conventional(p).values();
    const auto h = closed_form_sensitivity_hydrogen(p).values(), hi = sensitivity_hydrogen(p).values();
    for (std::size_t k = 0; k < 6; ++k) worst = std::max({worst, rel_err(c[k], ci[k]), rel_err(h[k], hi[k])});
  }
  EXPECT_GT(worst, 1e-8);
  EXPECT_LT(worst, 1e-1);
}

TEST(Sensitivity, SupplyChainSigns) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const LvmParams p = random_params(rng);
    const SensitivityVector h = sensitivity_hydrogen(p);
    const SensitivityVector c = sensitivity_conventional(p);
    EXPECT_GT(h.d_mu_h, 0.0);
    EXPECT_GT(h.d_mu_c, 0.0);
    EXPECT_LT(c.d_mu_h, 0.0);
    const double sd = std::sqrt(discriminant(p));
    const double sign_term =
        -p.a() * p.mu_h() - p.epsilon() * p.mu_c() + p.gamma_c() * p.gamma_h() + sd;
    if (std::abs(sign_term) > 1e-12 * sd) {
      EXPECT_EQ(std::signbit(c.d_mu_c), std::signbit(sign_term));
    }
  }
}

TEST(Sensitivity, MatchesFiniteDifferences) {
  auto check = [](const LvmParams& p) {
    const SensitivityPair fd = finite_difference_sensitivity(p, 1e-6);
    const auto h = sensitivity_hydrogen(p).values(), hf = fd.hydrogen.values();
    const auto c = sensitivity_conventional(p).values(), cf = fd.conventional.values();
    for (std::size_t k = 0; k < 6; ++k) {
      EXPECT_LT(rel_err(h[k], hf[k]), 1e-6) << "d y_inf / d " << SensitivityVector::names[k];
      EXPECT_LT(rel_err(c[k], cf[k]), 1e-6) << "d x_inf / d " << SensitivityVector::names[k];
    }
  };
  check(grad_params);
  check(moderate);
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) check(random_params(rng));
}

TEST(FiniteDifference, SymmetricTotalDerivative) {
  const LvmParams p{0.02, 0.02, 0.004, 0.004, 0.5, 0.3};
  const SensitivityPair fd = finite_difference_sensitivity(p, 1e-6);
  EXPECT_NEAR(fd.hydrogen.d_mu_h + fd.conventional.d_mu_h, 1.0 / 0.02, 1e-6 * 50.0);
}

TEST(FiniteDifference, ErrorShrinksQuadratically) {
  const double exact = sensitivity_hydrogen(grad_params).d_epsilon;
  const double e1 = std::abs(finite_difference_sensitivity(grad_params, 2e-2).hydrogen.d_epsilon - exact);
  const double e2 = std::abs(finite_difference_sensitivity(grad_params, 1e-2).hydrogen.d_epsilon - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(FiniteDifference, InvalidPerturbation) {
  EXPECT_THROW(finite_difference_sensitivity(grad_params.with_mu_h(0.0), 1e-6), OracleInvalidError);
  EXPECT_THROW(finite_difference_sensitivity(grad_params, 0.0), InvalidArgument);
}

TEST(PseudoLog, Examples) {
  EXPECT_EQ(pseudo_log(0.0), 0.0);
  EXPECT_NEAR(pseudo_log(100.4), 2.006038, 1e-6);
  EXPECT_NEAR(pseudo_log(-99.0), -2.0, 1e-15);
  // Gradient-figure magnitudes fit the [-5, 5] axis.
  for (double g : sensitivity_hydrogen(grad_params).values()) EXPECT_LE(std::abs(pseudo_log(g)), 5.0);
}
