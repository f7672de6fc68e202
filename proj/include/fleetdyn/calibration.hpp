#pragma once

// Historical calibration of the growth model: fleet series ingestion, the
// point-wise relative error metric, and a damped Gauss-Newton
// (Levenberg-Marquardt) least-squares fit of (gamma, mu, n0).

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fleetdyn/dynamics.hpp"
#include "fleetdyn/error.hpp"

namespace fleetdyn {

struct FleetObservation {
  int year = 0;
  double fleet = 0.0;  ///< Mveh
};

/// Yearly fleet observations, strictly increasing in year, all positive.
class FleetSeries {
 public:
  explicit FleetSeries(std::vector<FleetObservation> obs) : obs_(std::move(obs)) {
    detail::require(!obs_.empty(), "fleet series: no observations");
    for (std::size_t i = 0; i < obs_.size(); ++i) {
      detail::require(detail::finite_positive(obs_[i].fleet),
                      "fleet series: fleet must be > 0 (year " + std::to_string(obs_[i].year) +
                          ")");
      if (i > 0)
        detail::require(obs_[i].year > obs_[i - 1].year,
                        "fleet series: years must be strictly increasing (year " +
                            std::to_string(obs_[i].year) + ")");
    }
  }

  const std::vector<FleetObservation>& observations() const noexcept { return obs_; }
  std::size_t size() const noexcept { return obs_.size(); }
  const FleetObservation& operator[](std::size_t i) const { return obs_[i]; }
  const FleetObservation& front() const { return obs_.front(); }
  const FleetObservation& back() const { return obs_.back(); }
  auto begin() const noexcept { return obs_.begin(); }
  auto end() const noexcept { return obs_.end(); }

 private:
  std::vector<FleetObservation> obs_;
};

/// Fuel mass balance behind the growth model. Unit contract: m_dot and
/// m_i_dot in kg/year, m_i in kg per vehicle. Waste is fixed at zero.
struct FuelMassModel {
  double m_dot = 0.0;    ///< total fuel mass consumed by the fleet, kg/year
  double m_i = 0.0;      ///< fuel mass attributed to one vehicle, kg
  double m_i_dot = 0.0;  ///< per-vehicle consumption, kg/year
  static constexpr double m_w_dot = 0.0;

  double m_t_dot() const noexcept { return m_dot + m_w_dot; }
};

/// gamma = m_i_dot / m_i (1/year), mu = m_dot / m_i converted to Mveh/year.
/// A zero per-vehicle consumption yields gamma = 0, which GrowthParams rejects.
inline GrowthParams derive_growth_params(const FuelMassModel& f) {
  detail::require(detail::finite_non_negative(f.m_dot) && detail::finite_non_negative(f.m_i) &&
                      detail::finite_non_negative(f.m_i_dot),
                  "fuel mass model: quantities must be finite and >= 0");
  detail::require(f.m_i > 0.0, "fuel mass model: m_i must be > 0 (division by zero)");
  return GrowthParams(f.m_i_dot / f.m_i, f.m_dot / f.m_i / vehicles_per_mveh);
}

inline double pointwise_error(double x_data, double x_model) {
  detail::require(x_data != 0.0, "pointwise_error: x_data must be non-zero");
  return std::abs((x_data - x_model) / x_data);
}

struct ErrorStats {
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation
};

/// Mean and population standard deviation of point-wise errors.
inline ErrorStats error_stats(std::span<const double> data, std::span<const double> model) {
  detail::require(data.size() == model.size() && !data.empty(),
                  "error_stats: data and model must be non-empty and equally sized");
  const auto n = static_cast<double>(data.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) sum += pointwise_error(data[i], model[i]);
  const double mean = sum / n;
  double var = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double d = pointwise_error(data[i], model[i]) - mean;
    var += d * d;
  }
  return {mean, std::sqrt(var / n)};
}

/// Error statistics of a data series against the x component of a model
/// trajectory, linearly interpolated at the data years.
inline ErrorStats mean_error(const FleetSeries& data, const Trajectory& model) {
  std::vector<double> d, m;
  d.reserve(data.size());
  m.reserve(data.size());
  for (const auto& o : data) {
    const auto t = static_cast<double>(o.year);
    if (!model.covers(t))
      throw RangeError("mean_error: data year " + std::to_string(o.year) +
                       " not covered by the model trajectory");
    d.push_back(o.fleet);
    m.push_back(model.at(t).x);
  }
  return error_stats(d, m);
}

/// Unconstrained fit iterate; gamma may be <= 0 here.
struct GrowthFitIterate {
  double gamma = 0.0;
  double mu = 0.0;
  double n0 = 0.0;
  double ssr = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, GrowthFitIterate best) : Error(what), best_(best) {}
  const GrowthFitIterate& best() const noexcept { return best_; }

 private:
  GrowthFitIterate best_;
};

struct FitResult {
  GrowthParams params;
  double n0 = 0.0;   ///< Mveh at anchor_year
  int anchor_year = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  double ssr = 0.0;
  int iterations = 0;
};

struct FitOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
  double initial_damping = 1e-3;
};

namespace detail {

/// (1 - exp(-z)) / z and its derivative, stable through z = 0.
inline double growth_kernel(double z) { return z == 0.0 ? 1.0 : -std::expm1(-z) / z; }

inline double growth_kernel_derivative(double z) {
  if (std::abs(z) < 1e-2) return -0.5 + z / 3.0 - z * z / 8.0 + z * z * z / 30.0 -
                                 z * z * z * z / 144.0;
  return (z * std::exp(-z) + std::expm1(-z)) / (z * z);
}

/// Closed-form growth solution written so that gamma may take any sign.
inline double growth_model(double gamma, double mu, double n0, double tau) {
  return n0 * std::exp(-gamma * tau) + mu * tau * growth_kernel(gamma * tau);
}

inline std::array<double, 3> growth_model_gradient(double gamma, double mu, double n0,
                                                   double tau) {
  const double z = gamma * tau;
  const double decay = std::exp(-z);
  return {-tau * n0 * decay + mu * tau * tau * growth_kernel_derivative(z),
          tau * growth_kernel(z), decay};
}

/// Solves the 3x3 system m x = rhs by Gaussian elimination with partial pivoting.
inline bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs,
                   std::array<double, 3>& x) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0 || !std::isfinite(m[piv][c])) return false;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 3; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = rhs[r];
    for (int k = r + 1; k < 3; ++k) s -= m[r][k] * x[k];
    x[r] = s / m[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

}  // namespace detail

/// Sum of squared residuals of the growth closed form against the data, with
/// n0 anchored at the first data year.
inline double growth_ssr(const FleetSeries& data, double gamma, double mu, double n0) {
  const int y0 = data.front().year;
  double ssr = 0.0;
  for (const auto& o : data) {
    const double r = detail::growth_model(gamma, mu, n0, o.year - y0) - o.fleet;
    ssr += r * r;
  }
  return ssr;
}

/// Least-squares fit of (gamma, mu, n0) with n0 anchored at the earliest data
/// year. Levenberg-Marquardt with Marquardt diagonal scaling and x10 / /10
/// damping updates, started from gamma0 = 1/span, mu0 = gamma0 * last value,
/// n0 = first value. Stops when an accepted step changes the SSR by less than
/// relative_tolerance, or when no damped step can reduce it.
inline FitResult fit_growth(const FleetSeries& data, const FitOptions& opt = {}) {
  detail::require(data.size() >= 3, "fit_growth: need at least 3 data points");
  const int y0 = data.front().year;
  const double span = data.back().year - y0;

  GrowthFitIterate it;
  it.gamma = 1.0 / span;
  it.mu = it.gamma * data.back().fleet;
  it.n0 = data.front().fleet;
  it.ssr = growth_ssr(data, it.gamma, it.mu, it.n0);

  double scale = 0.0;
  for (const auto& o : data) scale += o.fleet * o.fleet;

  double lambda = opt.initial_damping;
  bool converged = false;
  while (!converged) {
    if (it.iterations >= opt.max_iterations)
      throw FitError("fit_growth: no convergence after " + std::to_string(opt.max_iterations) +
                         " iterations",
                     it);
    ++it.iterations;

    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (const auto& o : data) {
      const double tau = o.year - y0;
      const auto g = detail::growth_model_gradient(it.gamma, it.mu, it.n0, tau);
      const double r = detail::growth_model(it.gamma, it.mu, it.n0, tau) - o.fleet;
      for (int i = 0; i < 3; ++i) {
        jtr[i] += g[i] * r;
        for (int j = 0; j < 3; ++j) jtj[i][j] += g[i] * g[j];
      }
    }

    for (;;) {
      auto damped = jtj;
      for (int i = 0; i < 3; ++i) damped[i][i] += lambda * jtj[i][i];
      std::array<double, 3> step{};
      const bool solved = detail::solve3(damped, {-jtr[0], -jtr[1], -jtr[2]}, step);
      if (solved) {
        const double g = it.gamma + step[0], m = it.mu + step[1], n = it.n0 + step[2];
        const double ssr = growth_ssr(data, g, m, n);
        if (std::isfinite(ssr) && ssr < it.ssr) {
          const double change = it.ssr - ssr;
          it.gamma = g;
          it.mu = m;
          it.n0 = n;
          converged = change <= opt.relative_tolerance * it.ssr ||
                      ssr <= 1e-30 * scale;
          it.ssr = ssr;
          lambda = std::max(lambda / 10.0, 1e-12);
          break;
        }
      }
      lambda *= 10.0;
      if (lambda > 1e16) {
        // No damped step descends: the iterate is stationary.
        converged = true;
        break;
      }
    }
  }

  if (!(it.gamma > 0.0))
    throw FitError("fit_growth: fitted gamma = " + std::to_string(it.gamma) +
                       " <= 0; the data do not show saturating growth",
                   it);
  if (!(it.mu >= 0.0))
    throw FitError("fit_growth: fitted mu = " + std::to_string(it.mu) + " < 0", it);

  std::vector<double> d, m;
  for (const auto& o : data) {
    d.push_back(o.fleet);
    m.push_back(detail::growth_model(it.gamma, it.mu, it.n0, o.year - y0));
  }
  const ErrorStats stats = error_stats(d, m);
  return FitResult{GrowthParams(it.gamma, it.mu), it.n0, y0,       stats.mean,
                   stats.std,                     it.ssr, it.iterations};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && !s.empty();
}

}  // namespace detail

/// Parses `year,fleet_mveh` CSV text. Blank lines are skipped.
inline FleetSeries parse_fleet_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<FleetObservation> obs;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = detail::trim(line);
    if (row.empty()) continue;
    if (!header) {
      if (row != "year,fleet_mveh")
        throw ParseError("expected header 'year,fleet_mveh', got '" + std::string(row) + "'",
                         lineno);
      header = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
      throw ParseError("expected 2 comma-separated fields", lineno);
    FleetObservation o;
    if (!detail::parse_number(row.substr(0, comma), o.year))
      throw ParseError("bad year '" + std::string(row.substr(0, comma)) + "'", lineno);
    if (!detail::parse_number(row.substr(comma + 1), o.fleet))
      throw ParseError("bad fleet value '" + std::string(row.substr(comma + 1)) + "'", lineno);
    obs.push_back(o);
  }
  if (!header) throw ParseError("empty fleet CSV");
  if (obs.empty()) throw ParseError("fleet CSV has a header but no rows");
  return FleetSeries(std::move(obs));
}

inline FleetSeries load_fleet_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open fleet CSV '" + path + "'");
  return parse_fleet_csv(in);
}

}  // namespace fleetdyn
