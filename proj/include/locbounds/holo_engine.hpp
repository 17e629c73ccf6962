#pragma once

// Circle-average bounds on ln|Omega(0)| from an envelope, and the closed-form
// exponent tables.

#include <cmath>
#include <complex>
#include <concepts>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "locbounds/bound_kernels.hpp"
#include "locbounds/errors.hpp"
#include "locbounds/numerics.hpp"

namespace locbounds {

struct GapModel {
  double Delta;
  double v;

  GapModel(double delta, double velocity) : Delta(delta), v(velocity) {
    require(delta > 0 && std::isfinite(delta), "GapModel: Delta must be positive");
    require(velocity > 0 && std::isfinite(velocity), "GapModel: v must be positive");
  }

  /// Membership in K_Delta = {w real : |w| >= Delta}.
  bool excluded(std::complex<double> w, double tol = 0.0) const {
    return std::abs(w.imag()) <= tol && std::abs(w.real()) >= Delta - tol;
  }
};

enum class Method { Nonconformal, Conformal, LargeAlpha, Exponential, Qac, Prior };
enum class EnvelopeKind { PolyLogOverPower, PolyTimesExp };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Nonconformal: return "nonconformal";
    case Method::Conformal: return "conformal";
    case Method::LargeAlpha: return "large-alpha";
    case Method::Exponential: return "exponential";
    case Method::Qac: return "qac";
    case Method::Prior: return "prior";
  }
  return "?";
}

struct BoundResult {
  double exponent = 0.0;
  EnvelopeKind envelope_kind = EnvelopeKind::PolyLogOverPower;
  int poly_degree = 0;
  Method method = Method::Conformal;
  std::map<std::string, double> constants;
};

// ---------------------------------------------------------------------------
// Envelopes accepted by the circle averages

template <class E>
concept LogEnvelope = requires(const E& e, double y) {
  { e.log_value(y) } -> std::convertible_to<double>;
};

/// Omega_bar == c.
struct ConstantEnvelope {
  double c = 1.0;
  double log_value(double) const { return std::log(c); }
};

/// Omega_bar == c / y, the generic small-y behaviour.
struct InverseYEnvelope {
  double c = 1.0;
  double log_value(double y) const { return std::log(c) - std::log(y); }
};

template <LogEnvelope E>
std::optional<double> envelope_t0(const E& e) {
  if constexpr (requires { e.crossover_time(); })
    return e.crossover_time();
  else
    return std::nullopt;
}

template <LogEnvelope E>
std::vector<double> envelope_kinks(const E& e) {
  if constexpr (requires { e.kinks(); })
    return e.kinks();
  else
    return {};
}

// ---------------------------------------------------------------------------
// Maps from the unit disk into C \ K_Delta

/// f(xi) = scale * xi.
struct LinearMap {
  double scale = 1.0;
  std::complex<double> operator()(std::complex<double> z) const { return scale * z; }
  double imag(double rho, double theta) const { return scale * rho * std::sin(theta); }
  std::optional<double> step_angle(double) const { return std::nullopt; }
};

/// f(z) = (2v/pi) atanh( 2z/(z^2+1) tanh(Delta pi / 2v) ).
struct StripMap {
  GapModel gap;

  double a() const { return gap.Delta * std::numbers::pi / (2.0 * gap.v); }

  std::complex<double> operator()(std::complex<double> z) const {
    require(std::abs(z) < 1.0, "conformal_f: |z| must be < 1");
    std::complex<double> w = 2.0 * z / (z * z + 1.0) * std::tanh(a());
    return 2.0 * gap.v / std::numbers::pi * std::atanh(w);
  }

  /// |Im f(rho e^{i theta})| in closed form:
  ///   (v/pi) atan2(4 T rho (1-rho^2) sin, (1-rho^2)^2 + 4 rho^2 sech^2 a - 4 rho^2 sin^2)
  double imag(double rho, double theta) const {
    const double T = std::tanh(a());
    const double s = std::abs(std::sin(theta));
    const double om = (1.0 - rho) * (1.0 + rho);
    const double sech = a() > 700 ? 2.0 * std::exp(-a()) : 1.0 / std::cosh(a());
    double num = 4.0 * T * rho * om * s;
    double den = om * om + 4.0 * rho * rho * (sech * sech - s * s);
    return gap.v / std::numbers::pi * std::atan2(num, den);
  }

  /// Angle in (0, pi/2) where y(theta) crosses v/2 (the step as rho -> 1).
  std::optional<double> step_angle(double rho) const {
    const double om = (1.0 - rho) * (1.0 + rho);
    const double sech = a() > 700 ? 2.0 * std::exp(-a()) : 1.0 / std::cosh(a());
    double s2 = (om * om + 4.0 * rho * rho * sech * sech) / (4.0 * rho * rho);
    if (s2 >= 1.0) return std::nullopt;
    return std::asin(std::sqrt(s2));
  }
};

inline std::complex<double> conformal_f(std::complex<double> z, const GapModel& gap) { return StripMap{gap}(z); }

// ---------------------------------------------------------------------------
// Circle averages

namespace detail {

inline double angle_where(const auto& map, double rho, double y_target) {
  auto g = [&](double th) { return map.imag(rho, th) - y_target; };
  auto root = bisect(g, 0.0, std::numbers::pi / 2, 1e-15);
  return root ? *root : -1.0;
}

}  // namespace detail

/// (1/2pi) int_0^{2pi} ln Omega_bar(|Im f(rho e^{i theta})|) d theta.
///
/// The integrable ln(1/sin) singularity at theta = 0 is removed analytically:
///   (2/pi) int_0^{pi/2} [ln Omega_bar(y(theta)) + ln sin theta] d theta + ln 2,
/// which is bounded whenever Omega_bar ~ 1/y and y ~ sin theta near 0.
template <LogEnvelope E, class Map>
double circle_average_log(const E& env, const Map& map, double rho, quad::Options opt = {1e-10, 1e-10, 4000, true}) {
  const double half_pi = std::numbers::pi / 2;
  auto integrand = [&](double th) {
    double y = map.imag(rho, th);
    if (!(y > 0)) y = std::numeric_limits<double>::min();
    return env.log_value(y) + std::log(std::sin(th));
  };
  // Integrability test near theta = 0: anything growing like 1/theta or
  // faster is rejected, logarithms pass.
  const double th_small = 1e-12;
  double g_a = integrand(1e-8), g_b = integrand(th_small);
  if (!std::isfinite(g_a) || !std::isfinite(g_b) || th_small * std::abs(g_b) > 1e-6)
    throw DivergenceError("circle average: envelope is not integrable against ln sin near theta = 0");

  std::vector<double> breaks;
  if (auto th = map.step_angle(rho)) {
    breaks.push_back(*th);
    double w = (1.0 - rho);
    for (double k : {1.0, 10.0, 100.0}) {
      breaks.push_back(*th - k * w);
      breaks.push_back(*th + k * w);
    }
  }
  for (double yk : envelope_kinks(env)) {
    double th = detail::angle_where(map, rho, yk);
    if (th > 0) breaks.push_back(th);
  }
  std::erase_if(breaks, [&](double b) { return !(b > 0 && b < half_pi); });
  auto res = quad::integrate(integrand, 0.0, half_pi, breaks, opt);
  return res.value * 2.0 / std::numbers::pi + std::numbers::ln2;
}

/// Disk of radius rho < Delta around the origin.
template <LogEnvelope E>
double disk_average_log_bound(const E& env, double rho, const GapModel& gap) {
  require(rho > 0 && rho < gap.Delta, "disk_average_log_bound: rho must lie in (0, Delta)");
  return circle_average_log(env, LinearMap{1.0}, rho);
}

/// Image of the circle of radius rho < 1 under the strip map.
template <LogEnvelope E>
double conformal_average_log_bound(const E& env, double rho, const GapModel& gap) {
  require(rho > 0 && rho < 1.0, "conformal_average_log_bound: rho must lie in (0, 1)");
  return circle_average_log(env, StripMap{gap}, rho);
}

struct RhoOptimum {
  double rho_star;
  double log_bound;
  double rho_init;
  double log_bound_init;
  int iterations;
  bool refined;  // refinement improved on the initial value
};

namespace detail {

/// Golden section over s = ln(1 - rho/scale), scale = 1 or Delta.
template <class F>
RhoOptimum optimize_over_log_distance(F&& bound, double scale, double rho_init) {
  const double s_lo = std::log(1e-12), s_hi = std::log(1.0 - 1e-3);
  double s_init = std::clamp(std::log1p(-rho_init / scale), s_lo, s_hi);
  rho_init = scale * -std::expm1(s_init);
  RhoOptimum out{rho_init, bound(rho_init), rho_init, 0.0, 0, false};
  out.log_bound_init = out.log_bound;
  try {
    auto m = golden_section([&](double s) { return bound(scale * -std::expm1(s)); }, s_lo, s_hi, 64, 1e-9);
    out.iterations = m.iterations;
    if (m.fx < out.log_bound) {
      out.rho_star = scale * -std::expm1(m.x);
      out.log_bound = m.fx;
      out.refined = true;
    }
  } catch (const QuadratureError&) {
    // keep the initialization
  }
  return out;
}

}  // namespace detail

/// Conformal-average bound minimized over rho. Starts from
/// 1 - rho = 1/(c t0) with c = 2 Delta / pi, or rho = 1/2 without a t0.
template <LogEnvelope E>
RhoOptimum optimize_rho(const E& env, const GapModel& gap) {
  double rho_init = 0.5;
  if (auto t0 = envelope_t0(env); t0 && *t0 > 0) rho_init = 1.0 - std::numbers::pi / (2.0 * gap.Delta * *t0);
  if (!(rho_init > 1e-3)) rho_init = 0.5;
  return detail::optimize_over_log_distance([&](double rho) { return conformal_average_log_bound(env, rho, gap); },
                                            1.0, rho_init);
}

/// Disk-average bound minimized over rho in (0, Delta).
template <LogEnvelope E>
RhoOptimum optimize_rho_disk(const E& env, const GapModel& gap) {
  return detail::optimize_over_log_distance([&](double rho) { return disk_average_log_bound(env, rho, gap); },
                                            gap.Delta, gap.Delta * 0.999);
}

// ---------------------------------------------------------------------------
// Closed-form exponents

/// (2 alpha Delta / pi v)(1 - cos theta0) + alpha (1 - 2 theta0 / pi),
/// theta0 = arcsin(v/Delta) for v < Delta, pi/2 otherwise.
inline BoundResult alpha1_nonconformal(double alpha, const GapModel& gap) {
  require(alpha > 0, "alpha1_nonconformal: alpha must be positive");
  const double pi = std::numbers::pi;
  double th0 = gap.v < gap.Delta ? std::asin(gap.v / gap.Delta) : pi / 2;
  double a1 = 2.0 * alpha * gap.Delta / (pi * gap.v) * (1.0 - std::cos(th0)) + alpha * (1.0 - 2.0 * th0 / pi);
  return {a1, EnvelopeKind::PolyLogOverPower, 2, Method::Nonconformal,
          {{"alpha", alpha}, {"Delta", gap.Delta}, {"v", gap.v}, {"theta0", th0}}};
}

/// ln(alpha - alpha1_conformal) = ln((2 alpha/pi) arcsin(sech(Delta pi / 2v))),
/// finite even where alpha1 rounds to alpha.
inline double log_alpha1_conformal_deficit(double alpha, const GapModel& gap) {
  const double a = gap.Delta * std::numbers::pi / (2.0 * gap.v);
  double log_asin_sech;
  if (a > 30.0)
    log_asin_sech = std::numbers::ln2 - a + std::log1p(-std::exp(-2.0 * a));  // asin(x) ~ x
  else
    log_asin_sech = std::log(std::asin(1.0 / std::cosh(a)));
  return std::log(2.0 * alpha / std::numbers::pi) + log_asin_sech;
}

inline BoundResult alpha1_conformal(double alpha, const GapModel& gap) {
  require(alpha > 0, "alpha1_conformal: alpha must be positive");
  const double a = gap.Delta * std::numbers::pi / (2.0 * gap.v);
  double a1 = 2.0 * alpha / std::numbers::pi * std::asin(std::tanh(a));
  return {a1, EnvelopeKind::PolyLogOverPower, 2, Method::Conformal,
          {{"alpha", alpha}, {"Delta", gap.Delta}, {"v", gap.v}, {"theta0", std::acos(std::tanh(a))},
           {"log_deficit", log_alpha1_conformal_deficit(alpha, gap)}}};
}

/// mu1 = (2 mu/pi) arcsin(tanh(Delta pi / 2 mu v)).
inline BoundResult mu1_exponential(double mu, const GapModel& gap) {
  require(mu > 0, "mu1_exponential: mu must be positive");
  double m1 = 2.0 * mu / std::numbers::pi * std::asin(std::tanh(gap.Delta * std::numbers::pi / (2.0 * mu * gap.v)));
  return {m1, EnvelopeKind::PolyTimesExp, 2, Method::Exponential, {{"mu", mu}, {"Delta", gap.Delta}, {"v", gap.v}}};
}

/// Best mu1 over a kappa family: kappa plays mu and omega(kappa) plays mu v.
inline BoundResult mu1_kappa_family(const KappaFamily& k, const GapModel& gap) {
  validate(k);
  BoundResult best{0.0, EnvelopeKind::PolyTimesExp, 2, Method::Exponential, {}};
  for (std::size_t i = 0; i < k.kappa.size(); ++i) {
    double kap = k.kappa[i];
    double m1 = 2.0 * kap / std::numbers::pi * std::asin(std::tanh(gap.Delta * std::numbers::pi / (2.0 * k.omega[i])));
    if (m1 > best.exponent) {
      best.exponent = m1;
      best.constants = {{"kappa", kap}, {"omega", k.omega[i]}, {"Delta", gap.Delta}};
    }
  }
  return best;
}

/// Two-body alpha > 2D: exponent alpha with a constant prefactor. Also solves
/// the crossover equation (x + c) e^{-c x} = x^{-alpha(gamma+1)} and records
/// its roots (or their absence).
inline BoundResult alpha1_large_alpha(double alpha, int D, const GapModel& gap, double crossover_constant = 1.0) {
  require(D >= 1, "alpha1_large_alpha: D must be a positive integer");
  require(alpha > 2.0 * D, "alpha1_large_alpha: alpha must exceed 2D");
  double gamma = (1.0 + D) / (alpha - 2.0 * D);
  BoundResult b{alpha, EnvelopeKind::PolyLogOverPower, 0, Method::LargeAlpha,
                {{"alpha", alpha}, {"D", double(D)}, {"gamma", gamma}, {"Delta", gap.Delta}, {"v", gap.v}}};
  if (auto x = solve_crossover(alpha * (gamma + 1.0), crossover_constant)) {
    b.constants["x1"] = x->first;
    b.constants["x2"] = x->second;
    b.constants["crossover_solved"] = 1.0;
  } else {
    b.constants["crossover_solved"] = 0.0;
  }
  return b;
}

/// Exponent of the quasiadiabatic-continuation route: alpha - D - 1 when
/// alpha > 2D, no bound otherwise.
inline std::optional<BoundResult> qac_comparison_exponent(double alpha, int D) {
  require(D >= 1, "qac_comparison_exponent: D must be a positive integer");
  if (!(alpha > 2.0 * D)) return std::nullopt;
  return BoundResult{alpha - D - 1.0, EnvelopeKind::PolyLogOverPower, 0, Method::Qac, {{"alpha", alpha}, {"D", double(D)}}};
}

enum class InteractionClass { PowerLaw, Exponential };

/// alpha/(1 + 2v/Delta) or mu/(1 + 2 mu v/Delta).
inline BoundResult prior_exponents(InteractionClass cls, double param, const GapModel& gap) {
  require(param > 0, "prior_exponents: decay parameter must be positive");
  if (cls == InteractionClass::PowerLaw)
    return {param / (1.0 + 2.0 * gap.v / gap.Delta), EnvelopeKind::PolyLogOverPower, 2, Method::Prior,
            {{"alpha", param}, {"Delta", gap.Delta}, {"v", gap.v}}};
  return {param / (1.0 + 2.0 * param * gap.v / gap.Delta), EnvelopeKind::PolyTimesExp, 2, Method::Prior,
          {{"mu", param}, {"Delta", gap.Delta}, {"v", gap.v}}};
}

}  // namespace locbounds
