#pragma once

// Closed-form long-run behaviour of the modified competition model: the
// discriminant Delta, the asymptotic fleets (x_inf, y_inf), and their analytic
// gradients with respect to the six coefficients. A central-difference
// verifier is provided alongside.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "fleetdyn/dynamics.hpp"
#include "fleetdyn/error.hpp"

namespace fleetdyn {

struct Equilibrium {
  double x_inf = 0.0;  ///< conventional asymptote, Mveh
  double y_inf = 0.0;  ///< hydrogen asymptote, Mveh
  double delta = 0.0;  ///< discriminant at the parameters used

  double total() const noexcept { return x_inf + y_inf; }
};

enum class StabilityClass { MonotoneEquilibrium, Oscillatory };

inline std::string_view to_string(StabilityClass c) {
  return c == StabilityClass::MonotoneEquilibrium ? "monotone-equilibrium" : "oscillatory";
}

/// Partial derivatives of one asymptote, ordered as the parameters appear in
/// the gradient plots: mu_h, mu_c, epsilon, a, gamma_h, gamma_c.
struct SensitivityVector {
  double d_mu_h = 0.0;
  double d_mu_c = 0.0;
  double d_epsilon = 0.0;
  double d_a = 0.0;
  double d_gamma_h = 0.0;
  double d_gamma_c = 0.0;

  static constexpr std::array<std::string_view, 6> names{"mu_h",    "mu_c",    "epsilon",
                                                         "a",       "gamma_h", "gamma_c"};

  std::array<double, 6> values() const {
    return {d_mu_h, d_mu_c, d_epsilon, d_a, d_gamma_h, d_gamma_c};
  }
};

struct SensitivityPair {
  SensitivityVector hydrogen;      ///< d y_inf / d param
  SensitivityVector conventional;  ///< d x_inf / d param
};

namespace detail {

/// The six additive terms of Delta; the last one is the only negative term.
inline std::array<double, 6> discriminant_terms(const LvmParams& p) {
  const double a = p.a(), e = p.epsilon(), gc = p.gamma_c(), gh = p.gamma_h();
  const double mc = p.mu_c(), mh = p.mu_h();
  return {a * a * mh * mh,         2.0 * a * e * mc * mh,  2.0 * a * gc * gh * mh,
          e * e * mc * mc,         gc * gc * gh * gh,      -2.0 * e * gc * gh * mc};
}

}  // namespace detail

inline double discriminant(const LvmParams& p) {
  const auto t = detail::discriminant_terms(p);
  return t[0] + t[1] + t[2] + t[3] + t[4] + t[5];
}

/// Classifies a raw discriminant. `scale` is the magnitude of the largest term
/// that went into it; |delta| <= 1e-12 * scale is treated as exactly zero.
inline StabilityClass classify_discriminant(double delta, double scale) {
  if (std::abs(delta) <= 1e-12 * std::abs(scale))
    throw DegenerateError("discriminant is zero to working precision; the equilibrium "
                          "gradients are singular there");
  return delta > 0.0 ? StabilityClass::MonotoneEquilibrium : StabilityClass::Oscillatory;
}

inline StabilityClass classify_stability(const LvmParams& p) {
  const auto terms = detail::discriminant_terms(p);
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  return classify_discriminant(discriminant(p), scale);
}

namespace detail {

inline double checked_sqrt_delta(const LvmParams& p) {
  const double delta = discriminant(p);
  if (!(delta > 0.0))
    throw NoFixedPointError("Delta = " + std::to_string(delta) +
                            " <= 0: oscillatory regime, no monotone fixed point");
  return std::sqrt(delta);
}

template <class T>
T sqrt_of(T v) {
  return std::sqrt(v);
}

#ifdef __SIZEOF_FLOAT128__
/// Wide type for the difference oracle; two Newton steps refine the
/// long-double root to full binary128 precision.
using oracle_real = __float128;

template <>
inline __float128 sqrt_of(__float128 v) {
  if (!(v > 0)) return 0;
  __float128 r = std::sqrt(static_cast<long double>(v));
  r = (r + v / r) / 2;
  r = (r + v / r) / 2;
  return r;
}
#else
using oracle_real = long double;
#endif

template <class T>
struct Roots {
  T x_inf, y_inf, delta;
};

/// Fixed point in precision T. Uses conjugate forms of the closed-form roots
/// so neither component suffers cancellation when it is small.
template <class T>
Roots<T> equilibrium_roots(T a, T e, T gc, T gh, T mc, T mh) {
  const T delta = a * a * mh * mh + 2 * a * e * mc * mh + 2 * a * gc * gh * mh + e * e * mc * mc +
                  gc * gc * gh * gh - 2 * e * gc * gh * mc;
  if (!(delta > 0))
    throw NoFixedPointError("Delta = " + std::to_string(static_cast<double>(delta)) +
                            " <= 0: oscillatory regime, no monotone fixed point");
  const T sd = sqrt_of(delta);

  // x_inf = (b + g_c g_h - sqrt D) / (2 e g_c), with b = a mu_h + e mu_c.
  // Its numerator times (b + g_c g_h + sqrt D) equals 4 e g_c g_h mu_c.
  const T b = a * mh + e * mc;
  const T x_inf = 2 * mc * gh / (b + gc * gh + sd);

  // y_inf = (b - g_c g_h + sqrt D) / (2 a g_h); conjugate when b - g_c g_h < 0.
  const T bm = b - gc * gh;
  const T y_inf = bm >= 0 ? (bm + sd) / (2 * a * gh) : 2 * gc * mh / (sd - bm);
  return {x_inf, y_inf, delta};
}

}  // namespace detail

/// Fixed point of the modified model.
inline Equilibrium asymptotic_state(const LvmParams& p) {
  const auto r = detail::equilibrium_roots(p.a(), p.epsilon(), p.gamma_c(), p.gamma_h(), p.mu_c(),
                                           p.mu_h());
  return {r.x_inf, r.y_inf, r.delta};
}

/// d y_inf / d param, the closed forms obtained by differentiating y_inf,
/// evaluated term by term. Several of them subtract nearly equal quantities
/// (e.g. d x_inf / d gamma_c loses ~1e-3 relative on ordinary inputs); prefer
/// sensitivity_hydrogen().
inline SensitivityVector closed_form_sensitivity_hydrogen(const LvmParams& p) {
  const double a = p.a(), e = p.epsilon(), gc = p.gamma_c(), gh = p.gamma_h();
  const double mc = p.mu_c(), mh = p.mu_h();
  const double sd = detail::checked_sqrt_delta(p);
  const double g = gc * gh;

  SensitivityVector s;
  s.d_mu_h = (a * mh + e * mc + g + sd) / (2.0 * gh * sd);
  s.d_mu_c = e * (a * mh + e * mc - g + sd) / (2.0 * a * gh * sd);
  s.d_epsilon = mc * (a * mh + e * mc - g + sd) / (2.0 * a * gh * sd);
  s.d_a = -(a * e * mc * mh + a * g * mh + e * e * mc * mc - 2.0 * e * g * mc + g * g +
            (e * mc - g) * sd) /
          (2.0 * a * a * gh * sd);
  s.d_gamma_h = -(a * a * mh * mh + 2.0 * a * e * mc * mh + a * g * mh + e * e * mc * mc -
                  e * g * mc + (a * mh + e * mc) * sd) /
                (2.0 * a * gh * gh * sd);
  s.d_gamma_c = (a * mh - e * mc + g - sd) / (2.0 * a * sd);
  return s;
}

/// d x_inf / d param, closed forms; see closed_form_sensitivity_hydrogen().
inline SensitivityVector closed_form_sensitivity_conventional(const LvmParams& p) {
  const double a = p.a(), e = p.epsilon(), gc = p.gamma_c(), gh = p.gamma_h();
  const double mc = p.mu_c(), mh = p.mu_h();
  const double sd = detail::checked_sqrt_delta(p);
  const double g = gc * gh;

  SensitivityVector s;
  s.d_mu_h = a * (-a * mh - e * mc - g + sd) / (2.0 * e * gc * sd);
  s.d_mu_c = (-a * mh - e * mc + g + sd) / (2.0 * gc * sd);
  s.d_epsilon = (a * a * mh * mh + a * e * mc * mh + 2.0 * a * g * mh - e * g * mc + g * g -
                 (a * mh + g) * sd) /
                (2.0 * e * e * gc * sd);
  s.d_a = mh * (-a * mh - e * mc - g + sd) / (2.0 * e * gc * sd);
  s.d_gamma_h = (-a * mh + e * mc - g + sd) / (2.0 * e * sd);
  s.d_gamma_c = (a * a * mh * mh + 2.0 * a * e * mc * mh + a * g * mh + e * e * mc * mc -
                 e * g * mc - (a * mh + e * mc) * sd) /
                (2.0 * e * gc * gc * sd);
  return s;
}

/// Both gradients by implicit differentiation of the fixed-point equations
///   F1 = x (-g_c - a y) + mu_c = 0,   F2 = y (e x - g_h) + mu_h = 0,
/// i.e. dz/dp = -J^-1 dF/dp. Identical to the closed forms, but every entry of
/// J has a fixed sign at the fixed point, so nothing cancels.
inline SensitivityPair sensitivity(const LvmParams& p) {
  const double a = p.a(), e = p.epsilon(), gc = p.gamma_c(), gh = p.gamma_h();
  const double mh = p.mu_h();
  const Equilibrium eq = asymptotic_state(p);
  const double x = eq.x_inf, y = eq.y_inf;

  const double j11 = -gc - a * y;                          // < 0
  const double j12 = -a * x;                               // <= 0
  const double j21 = e * y;                                // >= 0
  const double j22 = mh > 0.0 ? -mh / y : e * x - gh;      // < 0, = e x - g_h
  const double det = j11 * j22 - j12 * j21;                // > 0

  // dF/dp columns in SensitivityVector order.
  const std::array<std::pair<double, double>, 6> df{{
      {0.0, 1.0}, {1.0, 0.0}, {0.0, x * y}, {-x * y, 0.0}, {0.0, -y}, {-x, 0.0}}};
  std::array<double, 6> dx{}, dy{};
  for (std::size_t i = 0; i < df.size(); ++i) {
    const auto [f1, f2] = df[i];
    dx[i] = -(j22 * f1 - j12 * f2) / det;
    dy[i] = -(j11 * f2 - j21 * f1) / det;
  }
  auto pack = [](const std::array<double, 6>& d) {
    return SensitivityVector{d[0], d[1], d[2], d[3], d[4], d[5]};
  };
  return {pack(dy), pack(dx)};
}

inline SensitivityVector sensitivity_hydrogen(const LvmParams& p) { return sensitivity(p).hydrogen; }

inline SensitivityVector sensitivity_conventional(const LvmParams& p) {
  return sensitivity(p).conventional;
}

/// Central differences of the fixed point, step h = h_rel * max(|param|, 1e-8).
/// Evaluated in quadruple precision where available: at h_rel ~ 1e-6 rounding
/// costs ~eps * 1e6 / elasticity of relative accuracy, and elasticities of
/// 1e-8 occur for ordinary inputs.
inline SensitivityPair finite_difference_sensitivity(const LvmParams& p, double h_rel) {
  detail::require(h_rel > 0.0 && std::isfinite(h_rel), "finite difference: h_rel must be > 0");
  using T = detail::oracle_real;
  // Same order as SensitivityVector::names.
  const std::array<T, 6> base{p.mu_h(), p.mu_c(), p.epsilon(), p.a(), p.gamma_h(), p.gamma_c()};
  auto roots_at = [&](std::size_t i, T value) {
    std::array<T, 6> q = base;
    q[i] = value;
    try {
      // Domain check through the validating constructor.
      (void)LvmParams(static_cast<double>(q[5]), static_cast<double>(q[4]),
                      static_cast<double>(q[3]), static_cast<double>(q[2]),
                      static_cast<double>(q[1]), static_cast<double>(q[0]));
      return detail::equilibrium_roots<T>(q[3], q[2], q[5], q[4], q[1], q[0]);
    } catch (const InvalidArgument& e) {
      throw OracleInvalidError(std::string("finite difference: perturbation of ") +
                               std::string(SensitivityVector::names[i]) +
                               " leaves the valid region: " + e.what());
    } catch (const NoFixedPointError& e) {
      throw OracleInvalidError(std::string("finite difference: perturbation of ") +
                               std::string(SensitivityVector::names[i]) +
                               " crosses Delta <= 0: " + e.what());
    }
  };

  std::array<double, 6> dy{}, dx{};
  for (std::size_t i = 0; i < base.size(); ++i) {
    const T v = base[i];
    const T h = static_cast<T>(h_rel) * std::max(v < 0 ? -v : v, static_cast<T>(1e-8));
    const auto plus = roots_at(i, v + h);
    const auto minus = roots_at(i, v - h);
    // Divide by the realised step, which may differ from 2h by rounding.
    const T width = (v + h) - (v - h);
    dy[i] = static_cast<double>((plus.y_inf - minus.y_inf) / width);
    dx[i] = static_cast<double>((plus.x_inf - minus.x_inf) / width);
  }
  auto pack = [](const std::array<double, 6>& d) {
    return SensitivityVector{d[0], d[1], d[2], d[3], d[4], d[5]};
  };
  return {pack(dy), pack(dx)};
}

/// Signed pseudo-log10 used to display gradients spanning many decades.
inline double pseudo_log(double g) {
  if (g == 0.0) return 0.0;
  return std::copysign(std::log10(1.0 + std::abs(g)), g);
}

}  // namespace fleetdyn
