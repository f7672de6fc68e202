#pragma once

// Fleet dynamics: the first-order growth model, the classical Lotka-Volterra
// system and the modified (resource-fed) competition model, plus a fixed-step
// RK4 integrator. Fleet sizes are in Mveh, time in years.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fleetdyn/error.hpp"

namespace fleetdyn {

namespace detail {

inline bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
inline bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

}  // namespace detail

inline constexpr double vehicles_per_mveh = 1e6;

/// Parameters of dN/dt = -gamma N + mu. gamma is stored positive; the sign
/// lives in the right-hand side.
class GrowthParams {
 public:
  GrowthParams(double gamma, double mu) : gamma_(gamma), mu_(mu) {
    detail::require(detail::finite_positive(gamma), "growth: gamma must be > 0");
    detail::require(detail::finite_non_negative(mu), "growth: mu must be >= 0");
  }

  double gamma() const noexcept { return gamma_; }
  double mu() const noexcept { return mu_; }
  /// Saturation level mu / gamma.
  double limit() const noexcept { return mu_ / gamma_; }

 private:
  double gamma_;
  double mu_;
};

class ClassicalLvmParams {
 public:
  ClassicalLvmParams(double gamma_c, double gamma_h, double a, double epsilon)
      : gamma_c_(gamma_c), gamma_h_(gamma_h), a_(a), epsilon_(epsilon) {
    detail::require(detail::finite_positive(gamma_c), "classical LVM: gamma_c must be > 0");
    detail::require(detail::finite_positive(gamma_h), "classical LVM: gamma_h must be > 0");
    detail::require(detail::finite_positive(a), "classical LVM: a must be > 0");
    detail::require(detail::finite_positive(epsilon), "classical LVM: epsilon must be > 0");
  }

  double gamma_c() const noexcept { return gamma_c_; }
  double gamma_h() const noexcept { return gamma_h_; }
  double a() const noexcept { return a_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  double gamma_c_;
  double gamma_h_;
  double a_;
  double epsilon_;
};

/// Six coefficients of the modified competition model.
class LvmParams {
 public:
  LvmParams(double gamma_c, double gamma_h, double a, double epsilon, double mu_c,
            double mu_h)
      : gamma_c_(gamma_c),
        gamma_h_(gamma_h),
        a_(a),
        epsilon_(epsilon),
        mu_c_(mu_c),
        mu_h_(mu_h) {
    // Zero rates make the equilibrium denominators vanish.
    constexpr const char* hint = " (for a single uncoupled fleet use the growth model)";
    detail::require(detail::finite_positive(gamma_c),
                    std::string("LVM: gamma_c must be > 0") + hint);
    detail::require(detail::finite_positive(gamma_h),
                    std::string("LVM: gamma_h must be > 0") + hint);
    detail::require(detail::finite_positive(a), std::string("LVM: a must be > 0") + hint);
    detail::require(detail::finite_positive(epsilon),
                    std::string("LVM: epsilon must be > 0") + hint);
    detail::require(detail::finite_non_negative(mu_c), "LVM: mu_c must be >= 0");
    detail::require(detail::finite_non_negative(mu_h), "LVM: mu_h must be >= 0");
  }

  double gamma_c() const noexcept { return gamma_c_; }
  double gamma_h() const noexcept { return gamma_h_; }
  double a() const noexcept { return a_; }
  double epsilon() const noexcept { return epsilon_; }
  double mu_c() const noexcept { return mu_c_; }
  double mu_h() const noexcept { return mu_h_; }

  LvmParams with_gamma_c(double v) const { return {v, gamma_h_, a_, epsilon_, mu_c_, mu_h_}; }
  LvmParams with_gamma_h(double v) const { return {gamma_c_, v, a_, epsilon_, mu_c_, mu_h_}; }
  LvmParams with_a(double v) const { return {gamma_c_, gamma_h_, v, epsilon_, mu_c_, mu_h_}; }
  LvmParams with_epsilon(double v) const { return {gamma_c_, gamma_h_, a_, v, mu_c_, mu_h_}; }
  LvmParams with_mu_c(double v) const { return {gamma_c_, gamma_h_, a_, epsilon_, v, mu_h_}; }
  LvmParams with_mu_h(double v) const { return {gamma_c_, gamma_h_, a_, epsilon_, mu_c_, v}; }

 private:
  double gamma_c_;
  double gamma_h_;
  double a_;
  double epsilon_;
  double mu_c_;
  double mu_h_;
};

/// Conventional (x) and hydrogen (y) fleet at calendar time t. Components are
/// not clamped: non-negativity is a checked property, not an enforced one.
struct FleetState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  double total() const noexcept { return x + y; }
  bool non_negative() const noexcept { return x >= 0.0 && y >= 0.0; }
  bool finite() const noexcept {
    return std::isfinite(t) && std::isfinite(x) && std::isfinite(y);
  }
  friend bool operator==(const FleetState&, const FleetState&) = default;
};

/// Time derivative of a FleetState, Mveh/year.
struct Derivative {
  double dx = 0.0;
  double dy = 0.0;
  friend bool operator==(const Derivative&, const Derivative&) = default;
};

template <typename F>
concept FleetRhs = requires(const F& f, const FleetState& s) {
  { f(s) } -> std::convertible_to<Derivative>;
};

inline double rhs_growth(double n, const GrowthParams& p) { return -p.gamma() * n + p.mu(); }

inline Derivative rhs_classical(const FleetState& s, const ClassicalLvmParams& p) {
  return {s.x * (p.gamma_c() - p.a() * s.y), s.y * (p.epsilon() * s.x - p.gamma_h())};
}

inline Derivative rhs_modified(const FleetState& s, const LvmParams& p) {
  return {s.x * (-p.gamma_c() - p.a() * s.y) + p.mu_c(),
          s.y * (p.epsilon() * s.x - p.gamma_h()) + p.mu_h()};
}

/// Growth model on the x component; y is frozen.
struct GrowthSystem {
  GrowthParams params;
  Derivative operator()(const FleetState& s) const { return {rhs_growth(s.x, params), 0.0}; }
};

struct ClassicalSystem {
  ClassicalLvmParams params;
  Derivative operator()(const FleetState& s) const { return rhs_classical(s, params); }
};

struct ModifiedSystem {
  LvmParams params;
  Derivative operator()(const FleetState& s) const { return rhs_modified(s, params); }
};

/// One classical fourth-order Runge-Kutta step.
template <FleetRhs Rhs>
FleetState rk4_step(const Rhs& rhs, const FleetState& s, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("rk4_step: dt must be > 0");
  const double h2 = 0.5 * dt;
  const Derivative k1 = rhs(s);
  const Derivative k2 = rhs(FleetState{s.t + h2, s.x + h2 * k1.dx, s.y + h2 * k1.dy});
  const Derivative k3 = rhs(FleetState{s.t + h2, s.x + h2 * k2.dx, s.y + h2 * k2.dy});
  const Derivative k4 = rhs(FleetState{s.t + dt, s.x + dt * k3.dx, s.y + dt * k3.dy});
  return {s.t + dt, s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          s.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy)};
}

/// Time-ordered fleet states on a uniform grid. Only the final interval may be
/// shorter than the nominal step.
class Trajectory {
 public:
  Trajectory(std::vector<FleetState> states, double dt) : states_(std::move(states)), dt_(dt) {
    detail::require(dt > 0.0 && std::isfinite(dt), "trajectory: dt must be > 0");
    detail::require(!states_.empty(), "trajectory: needs at least one state");
    for (std::size_t i = 1; i < states_.size(); ++i) {
      const double step = states_[i].t - states_[i - 1].t;
      detail::require(step > 0.0, "trajectory: time must be strictly increasing");
      const bool last = i + 1 == states_.size();
      const double slack = 1e-9 * dt;
      detail::require(last ? step <= dt + slack : std::abs(step - dt) <= slack,
                      "trajectory: step size must be uniform");
    }
  }

  const std::vector<FleetState>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  const FleetState& operator[](std::size_t i) const { return states_[i]; }
  const FleetState& front() const { return states_.front(); }
  const FleetState& back() const { return states_.back(); }
  double dt() const noexcept { return dt_; }
  double t_begin() const noexcept { return states_.front().t; }
  double t_end() const noexcept { return states_.back().t; }
  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }

  bool covers(double t) const noexcept { return t >= t_begin() && t <= t_end(); }

  bool non_negative() const noexcept {
    for (const auto& s : states_)
      if (!s.non_negative()) return false;
    return true;
  }

  /// Linear interpolation in time; throws RangeError outside [t_begin, t_end].
  FleetState at(double t) const {
    if (!covers(t))
      throw RangeError("trajectory: t=" + std::to_string(t) + " outside [" +
                       std::to_string(t_begin()) + ", " + std::to_string(t_end()) + "]");
    if (states_.size() == 1) return states_.front();
    // Grid is uniform up to the last interval, so index directly.
    auto i = static_cast<std::size_t>(std::floor((t - t_begin()) / dt_));
    if (i >= states_.size() - 1) i = states_.size() - 2;
    while (i > 0 && states_[i].t > t) --i;
    while (i + 2 < states_.size() && states_[i + 1].t < t) ++i;
    const FleetState& lo = states_[i];
    const FleetState& hi = states_[i + 1];
    const double w = (t - lo.t) / (hi.t - lo.t);
    return {t, lo.x + w * (hi.x - lo.x), lo.y + w * (hi.y - lo.y)};
  }

 private:
  std::vector<FleetState> states_;
  double dt_;
};

/// Integrates from s0.t to t_end with fixed step dt. Grid times are computed
/// as t0 + i*dt so they do not accumulate rounding; the last step is shortened
/// when the span is not a multiple of dt. No clamping is applied.
template <FleetRhs Rhs>
Trajectory integrate(const Rhs& rhs, const FleetState& s0, double t_end, double dt) {
  detail::require(dt > 0.0 && std::isfinite(dt), "integrate: dt must be > 0");
  detail::require(std::isfinite(t_end) && t_end > s0.t, "integrate: t_end must exceed t0");
  detail::require(s0.finite(), "integrate: initial state must be finite");

  const double span = t_end - s0.t;
  // A remainder within rounding of a whole step counts as a whole step.
  const auto full = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
  const double rem = span - static_cast<double>(full) * dt;
  const bool partial = rem > 1e-9 * dt || full == 0;

  std::vector<FleetState> out;
  out.reserve(full + 2);
  out.push_back(s0);
  FleetState s = s0;
  auto check = [&](const FleetState& st) {
    if (!st.finite())
      throw IntegrationError("integrate: non-finite state at t=" + std::to_string(st.t) +
                             " (parameter blow-up?)");
  };
  for (std::size_t i = 1; i <= full; ++i) {
    s = rk4_step(rhs, s, dt);
    s.t = s0.t + static_cast<double>(i) * dt;
    if (i == full && !partial) s.t = t_end;
    check(s);
    out.push_back(s);
  }
  if (partial) {
    s = rk4_step(rhs, s, t_end - s.t);
    s.t = t_end;
    check(s);
    out.push_back(s);
  }
  return Trajectory(std::move(out), dt);
}

/// Exact solution of the growth model after `elapsed` years from n0.
inline double growth_closed_form(const GrowthParams& p, double n0, double elapsed) {
  detail::require(elapsed >= 0.0, "growth_closed_form: elapsed time must be >= 0");
  // n0 + (limit - n0)(1 - e^{-gamma t}), exact at t = 0.
  return n0 - (p.limit() - n0) * std::expm1(-p.gamma() * elapsed);
}

/// First integral V = eps x - g_h ln x + a y - g_c ln y of the classical system.
inline double lv_conserved_quantity(const FleetState& s, const ClassicalLvmParams& p) {
  detail::require(s.x > 0.0 && s.y > 0.0, "lv_conserved_quantity: x and y must be > 0");
  return p.epsilon() * s.x - p.gamma_h() * std::log(s.x) + p.a() * s.y -
         p.gamma_c() * std::log(s.y);
}

}  // namespace fleetdyn
