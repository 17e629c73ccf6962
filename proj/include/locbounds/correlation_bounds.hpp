#pragma once

// Correlation-decay bound from an envelope and a bound on |Omega(0)|:
//   |<S V>_c| <= (1/2pi) [2 y0 b0 + 2 int_{y0}^inf Omega_bar(y) dy].

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "locbounds/errors.hpp"
#include "locbounds/holo_engine.hpp"
#include "locbounds/numerics.hpp"

namespace locbounds {

struct AxisIntegral {
  std::complex<double> exact;
  std::complex<double> numeric;
  double error;
};

/// int_{-i inf}^{+i inf} d omega / (omega - mu) = -pi i sgn(mu), in the
/// symmetric principal-value sense. With omega = i y the integrand is
/// (y - i mu)/(y^2 + mu^2); the odd real part cancels.
inline AxisIntegral inverse_linear_axis_integral(double mu) {
  require(mu != 0.0 && std::isfinite(mu), "inverse_linear_axis_integral: mu must be nonzero");
  const double am = std::abs(mu);
  const double Y = 1e3 * am;
  auto res = quad::integrate([&](double y) { return -mu / (y * y + mu * mu); }, 0.0, Y, {am},
                             {1e-13, 1e-15, 2000, true});
  double tail = -(mu / am) * (std::numbers::pi / 2 - std::atan(Y / am));
  std::complex<double> numeric(0.0, 2.0 * (res.value + tail));
  std::complex<double> exact(0.0, mu > 0 ? -std::numbers::pi : std::numbers::pi);
  return {exact, numeric, 2.0 * res.error};
}

struct CorrelationBound {
  double r = 0.0;
  double y0 = 0.0;
  double value = 0.0;
  double tail_integral = 0.0;  // int_{y0}^inf Omega_bar
  double y_max = 0.0;          // truncation point of the numeric tail
  bool y0_from_root = false;
  std::optional<BoundResult> exponent;  // same exponent as the |Omega(0)| bound
};

struct CorrelationOptions {
  double y_lo = 1e-8;
  double y_hi_factor = 1e3;  // bracket [y_lo, y_hi_factor * v]
  double tail_rel = 1e-10;
  double y_cutoff = 1e12;
};

namespace detail {

/// int_a^b Omega_bar(y) dy via y = e^u.
template <LogEnvelope E>
double axis_integral(const E& env, double a, double b, double abs_tol = 1e-300) {
  auto f = [&](double u) { return std::exp(env.log_value(std::exp(u)) + u); };
  return quad::integrate(f, std::log(a), std::log(b), {}, {1e-11, abs_tol, 4000, true}).value;
}

}  // namespace detail

/// y0 solves Omega_bar(y0) = bound_at_zero by bisection in log y; falls back
/// to y0 = v without a root. The tail is integrated out to Y, growing Y by
/// 10x until Y Omega_bar(Y) (the size of the remainder for a 1/y^2 envelope)
/// drops below tail_rel times the running total.
template <LogEnvelope E>
CorrelationBound correlation_bound(const E& env, double r, const GapModel& gap, double bound_at_zero,
                                   std::optional<BoundResult> exponent = std::nullopt,
                                   const CorrelationOptions& opt = {}) {
  require(bound_at_zero >= 0 && std::isfinite(bound_at_zero), "correlation_bound: bound_at_zero must be >= 0");
  CorrelationBound out;
  out.r = r;
  out.exponent = std::move(exponent);
  out.y0 = gap.v;
  if (bound_at_zero > 0) {
    const double lb = std::log(bound_at_zero);
    auto g = [&](double s) { return env.log_value(std::exp(s)) - lb; };
    if (auto s = bisect(g, std::log(opt.y_lo), std::log(opt.y_hi_factor * gap.v), 1e-13)) {
      out.y0 = std::exp(*s);
      out.y0_from_root = true;
    }
  }
  double total = 0.0, a = out.y0, Y = std::max(10.0 * out.y0, 10.0 * gap.v);
  double prev_mass = std::numeric_limits<double>::infinity();
  int stalls = 0;
  while (true) {
    total += detail::axis_integral(env, a, Y, 1e-3 * opt.tail_rel * total);
    double mass = std::exp(env.log_value(Y) + std::log(Y));
    if (mass < opt.tail_rel * total) {
      total += mass;  // remainder estimate of a 1/y^2 envelope
      break;
    }
    if (mass > 0.5 * prev_mass) ++stalls;
    if (stalls >= 3 || Y > opt.y_cutoff)
      throw TailDivergenceError("correlation_bound: large-y axis integral of the envelope does not converge");
    prev_mass = mass;
    a = Y;
    Y *= 10.0;
  }
  out.y_max = Y;
  out.tail_integral = total;
  out.value = (2.0 * out.y0 * bound_at_zero + 2.0 * total) / (2.0 * std::numbers::pi);
  return out;
}

struct AxisDominanceReport {
  std::vector<double> y;
  std::vector<double> abs_omega;
  double bound_at_zero = 0.0;
  double max_excess = 0.0;  // max_y |Omega(iy)| - bound_at_zero
  bool passed = false;
};

/// Samples |Omega(iy)| on the grid and compares with the bound at zero.
inline AxisDominanceReport axis_dominance_check(const std::function<std::complex<double>(double)>& omega_on_axis,
                                                double bound_at_zero, const std::vector<double>& y_grid) {
  require(!y_grid.empty(), "axis_dominance_check: empty y grid");
  AxisDominanceReport rep;
  rep.bound_at_zero = bound_at_zero;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (double y : y_grid) {
    double a = std::abs(omega_on_axis(y));
    rep.y.push_back(y);
    rep.abs_omega.push_back(a);
    rep.max_excess = std::max(rep.max_excess, a - bound_at_zero);
  }
  rep.passed = rep.max_excess <= 0.0;
  return rep;
}

/// Default grid: 0 plus a geometric ladder from 1e-3 to 1e3 in units of the gap.
inline std::vector<double> default_axis_grid(double delta, int per_decade = 8) {
  std::vector<double> g{0.0};
  for (int i = -3 * per_decade; i <= 3 * per_decade; ++i) g.push_back(delta * std::pow(10.0, double(i) / per_decade));
  return g;
}

}  // namespace locbounds
