#pragma once

// Lieb-Robinson kernels C(r,t) and their Laplace envelopes
//   Omega_bar(r,y) = int_0^inf C(r,t) e^{-yt} dt.
// Envelopes are evaluated in log space; exp(log_value) can underflow for
// exponential kernels at large r while the log stays finite.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "locbounds/errors.hpp"
#include "locbounds/numerics.hpp"

namespace locbounds {

/// min{C e^{vt}/r^alpha, cap}. With linear_onset the growth piece is
/// C (e^{vt} - 1)/r^alpha, which vanishes at t = 0 (nu = 1 behaviour
/// needed for the correlation path).
struct HastingsKoma {
  double C = 1.0;
  double v = 1.0;
  double alpha = 3.0;
  int D = 1;
  double cap = 1.0;
  bool linear_onset = false;
};

/// Three-piece algebraic light cone for two-body interactions with alpha > 2D:
///   t <= t'          : c_short e^{v' t}/r^alpha
///   t' < t <= t0(r)  : c_mid_exp e^{vt - r/(C0 t^gamma)} + c_mid_pow t^{alpha(1+gamma)}/r^alpha
///   t > t0(r)        : cap
/// The middle piece is floored at the t' value of the first piece so that
/// the kernel stays monotone in t for every constant choice.
struct AlgebraicLightcone {
  double c_short = 1.0;
  double c_mid_exp = 1.0;
  double c_mid_pow = 1.0;
  double cap = 1.0;
  double v = 1.0;
  double v_prime = 1.0;
  double alpha = 5.0;
  int D = 1;
  double C0 = 1.0;
  bool convexity_verified = false;
  double crossover_constant = 1.0;  // the constant in (x+C)e^{-Cx} = x^{-alpha(gamma+1)}

  double gamma() const { return (1.0 + D) / (alpha - 2.0 * D); }
  double t_prime() const { return alpha * std::log(alpha) / v; }
  double t0(double r) const { return std::pow(r / (6.0 * v * C0), 1.0 / (gamma() + 1.0)); }
  double pow_exponent() const { return alpha * (1.0 + gamma()); }
};

/// min{C e^{-mu(r - vt)}, cap}.
struct Exponential {
  double C = 1.0;
  double mu = 1.0;
  double v = 1.0;
  double cap = 1.0;
};

/// min{cap, min_kappa C e^{omega(kappa) t - kappa r}} over a tabulated
/// family of (kappa, omega_m(i kappa)) pairs supplied by the user.
struct KappaFamily {
  double C = 1.0;
  double cap = 1.0;
  std::vector<double> kappa;
  std::vector<double> omega;
};

using LrbKernel = std::variant<HastingsKoma, AlgebraicLightcone, Exponential, KappaFamily>;

inline std::string variant_name(const LrbKernel& k) {
  static const char* names[] = {"HastingsKoma", "AlgebraicLightcone", "Exponential", "KappaFamily"};
  return names[k.index()];
}

inline double kernel_cap(const LrbKernel& k) {
  return std::visit([](const auto& x) { return x.cap; }, k);
}

inline void validate(const HastingsKoma& k) {
  require(k.D >= 1, "HastingsKoma: D must be a positive integer");
  require(k.alpha > k.D, "HastingsKoma: alpha must exceed D");
  require(k.C > 0 && k.v > 0 && k.cap > 0, "HastingsKoma: constants must be positive");
}

inline void validate(const AlgebraicLightcone& k) {
  require(k.D >= 1, "AlgebraicLightcone: D must be a positive integer");
  require(k.alpha > 2.0 * k.D, "AlgebraicLightcone: alpha must exceed 2D");
  require(k.c_short > 0 && k.c_mid_exp > 0 && k.c_mid_pow > 0 && k.cap > 0 && k.v > 0 &&
              k.v_prime > 0 && k.C0 > 0 && k.crossover_constant > 0,
          "AlgebraicLightcone: constants must be positive");
}

inline void validate(const Exponential& k) {
  require(k.C > 0 && k.mu > 0 && k.v > 0 && k.cap > 0, "Exponential: constants must be positive");
}

inline void validate(const KappaFamily& k) {
  require(k.C > 0 && k.cap > 0, "KappaFamily: constants must be positive");
  require(!k.kappa.empty() && k.kappa.size() == k.omega.size(),
          "KappaFamily: kappa and omega tables must be nonempty and of equal length");
  for (std::size_t i = 0; i < k.kappa.size(); ++i)
    require(k.kappa[i] > 0 && k.omega[i] > 0, "KappaFamily: kappa and omega(kappa) must be positive");
}

inline void validate(const LrbKernel& k) {
  std::visit([](const auto& x) { validate(x); }, k);
}

/// Samples omega(kappa) on a grid to build a KappaFamily.
inline KappaFamily make_kappa_family(const std::function<double(double)>& omega_of_kappa,
                                     const std::vector<double>& kappa_grid, double C = 1.0,
                                     double cap = 1.0) {
  KappaFamily k{C, cap, kappa_grid, {}};
  for (double kap : kappa_grid) k.omega.push_back(omega_of_kappa(kap));
  validate(k);
  return k;
}

// ---------------------------------------------------------------------------
// Kernel evaluation

namespace detail {

/// Growth law C A e^{w t} (or C A (e^{w t} - 1)) capped at `cap`, where the
/// amplitude A carries the r dependence: r^{-alpha} or e^{-mu r}.
struct Growth {
  double log_C;
  double log_A;
  double w;
  double log_cap;
  bool linear;

  double log_growth(double t) const {
    if (!linear) return log_C + log_A + w * t;
    if (t <= 0) return -std::numeric_limits<double>::infinity();
    double wt = w * t;
    double lg = wt > 30 ? wt + std::log1p(-std::exp(-wt)) : std::log(std::expm1(wt));
    return log_C + log_A + lg;
  }
  double value(double t) const { return std::exp(std::min(log_growth(t), log_cap)); }

  /// Time at which the growth piece reaches the cap (may be <= 0).
  double crossover() const {
    if (!linear) return (log_cap - log_C - log_A) / w;
    return log_add_exp(0.0, log_cap - log_C - log_A) / w;
  }
};

inline Growth growth(const HastingsKoma& k, double r) {
  return {std::log(k.C), -k.alpha * std::log(r), k.v, std::log(k.cap), k.linear_onset};
}
inline Growth growth(const Exponential& k, double r) {
  return {std::log(k.C), -k.mu * r, k.mu * k.v, std::log(k.cap), false};
}
inline Growth growth(const KappaFamily& k, std::size_t i, double r) {
  return {std::log(k.C), -k.kappa[i] * r, k.omega[i], std::log(k.cap), false};
}

inline double lightcone_piece1(const AlgebraicLightcone& k, double r, double t) {
  return k.c_short * std::exp(k.v_prime * t - k.alpha * std::log(r));
}

inline double lightcone_mid(const AlgebraicLightcone& k, double r, double t) {
  double e = k.c_mid_exp * std::exp(k.v * t - r / (k.C0 * std::pow(t, k.gamma())));
  double p = k.c_mid_pow * std::exp(k.pow_exponent() * std::log(t) - k.alpha * std::log(r));
  return std::max(lightcone_piece1(k, r, k.t_prime()), e + p);
}

inline double eval(const HastingsKoma& k, double r, double t) { return growth(k, r).value(t); }
inline double eval(const Exponential& k, double r, double t) { return growth(k, r).value(t); }
inline double eval(const KappaFamily& k, double r, double t) {
  double best = k.cap;
  for (std::size_t i = 0; i < k.kappa.size(); ++i) best = std::min(best, growth(k, i, r).value(t));
  return best;
}
inline double eval(const AlgebraicLightcone& k, double r, double t) {
  if (t > k.t0(r)) return k.cap;
  double val = t <= k.t_prime() ? lightcone_piece1(k, r, t) : lightcone_mid(k, r, t);
  return std::min(val, k.cap);
}

}  // namespace detail

/// C(r,t) of the selected variant, capped at the trivial constant bound.
inline double eval_lrb(const LrbKernel& kernel, double r, double t) {
  validate(kernel);
  require(r >= 1.0, "eval_lrb: r must be >= 1");
  require(t >= 0.0, "eval_lrb: t must be nonnegative");
  return std::visit([&](const auto& k) { return detail::eval(k, r, t); }, kernel);
}

// ---------------------------------------------------------------------------
// Lightcone construction helpers

/// Second-difference convexity test of e^{vt - r/(C0 t^gamma)} on [t', t0(r)]
/// over a log grid of r in [1, 1e8].
inline bool lightcone_convex(const AlgebraicLightcone& k, int r_points = 33, int t_points = 64) {
  const double g = k.gamma(), tp = k.t_prime();
  auto h = [&](double r, double t) { return k.v * t - r / (k.C0 * std::pow(t, g)); };
  for (int i = 0; i < r_points; ++i) {
    double r = std::pow(10.0, 8.0 * i / (r_points - 1));
    double t0 = k.t0(r);
    if (t0 <= tp) continue;
    double dt = (t0 - tp) / (t_points + 1);
    double delta = 0.25 * dt;
    for (int j = 1; j <= t_points; ++j) {
      double t = tp + j * dt;
      double base = h(r, t);
      double second = std::exp(h(r, t - delta) - base) + std::exp(h(r, t + delta) - base) - 2.0;
      if (second < -1e-12) return false;
    }
  }
  return true;
}

/// Grid searched for the lightcone constant C0: 2^k, k = -4..10.
inline std::vector<double> lightcone_c0_grid() {
  std::vector<double> g;
  for (int k = -4; k <= 10; ++k) g.push_back(std::ldexp(1.0, k));
  return g;
}

/// Sets C0 to the smallest grid value passing the convexity test.
/// If none passes, keeps the largest grid value and leaves the flag false,
/// in which case closed forms fall back to a max-based bound.
inline AlgebraicLightcone make_algebraic_lightcone(AlgebraicLightcone k) {
  auto grid = lightcone_c0_grid();
  k.C0 = grid.front();
  validate(k);
  for (double c0 : grid) {
    k.C0 = c0;
    if (lightcone_convex(k)) {
      k.convexity_verified = true;
      return k;
    }
  }
  k.convexity_verified = false;
  return k;
}

/// Roots x1 < x2 of (x + c) e^{-c x} = x^{-p}; nullopt when there are none.
inline std::optional<std::pair<double, double>> solve_crossover(double p, double c) {
  require(p > 0 && c > 0, "solve_crossover: p and c must be positive");
  auto h = [&](double x) { return std::log(x + c) - c * x + p * std::log(x); };
  // h' = 1/(x+c) - c + p/x has a single zero for x > 0.
  auto dh = [&](double x) { return 1.0 / (x + c) - c + p / x; };
  double top = 1.0;
  while (dh(top) > 0) top *= 2.0;
  auto xm = bisect(dh, 1e-300, top, 1e-15);
  if (!xm) return std::nullopt;
  double hm = h(*xm);
  if (!(hm > 0)) return std::nullopt;
  double lo = *xm;
  while (h(lo) > 0) lo *= 0.5;
  double hi = *xm;
  while (h(hi) > 0) hi *= 2.0;
  auto x1 = bisect(h, lo, *xm, 1e-15);
  auto x2 = bisect(h, *xm, hi, 1e-15);
  if (!x1 || !x2) return std::nullopt;
  return std::make_pair(*x1, *x2);
}

// ---------------------------------------------------------------------------
// Envelope

enum class EnvelopeMode { Numeric, ClosedForm };

struct Crossovers {
  std::optional<double> t0;       // time at which the kernel reaches its cap
  std::optional<double> t_prime;  // lightcone: first-piece crossover
  std::optional<double> y1, y2;   // lightcone: y-window where e^{-y t0} dominates
};

class OmegaBarEnvelope {
 public:
  OmegaBarEnvelope(LrbKernel kernel, double r, EnvelopeMode mode = EnvelopeMode::ClosedForm,
                   quad::Options opt = {})
      : kernel_(std::move(kernel)), r_(r), mode_(mode), opt_(opt) {
    validate(kernel_);
    require(r >= 1.0, "OmegaBarEnvelope: r must be >= 1");
    cache_crossovers();
  }

  const LrbKernel& kernel() const { return kernel_; }
  double r() const { return r_; }
  EnvelopeMode mode() const { return mode_; }
  const Crossovers& crossovers() const { return cross_; }
  std::optional<double> crossover_time() const { return cross_.t0; }
  double cap() const { return kernel_cap(kernel_); }

  /// y-values where the closed form changes branch (used as quadrature breaks).
  std::vector<double> kinks() const {
    std::vector<double> out;
    if (auto* hk = std::get_if<HastingsKoma>(&kernel_); hk && !hk->linear_onset) out.push_back(hk->v);
    if (auto* ex = std::get_if<Exponential>(&kernel_)) out.push_back(ex->mu * ex->v);
    if (cross_.y1) out.push_back(*cross_.y1);
    if (cross_.y2) out.push_back(*cross_.y2);
    return out;
  }

  double log_value(double y) const {
    require(y > 0 && std::isfinite(y), "omega_bar: y must be positive");
    if (mode_ == EnvelopeMode::Numeric) return log_numeric(y);
    return std::visit([&](const auto& k) { return log_closed(k, y); }, kernel_);
  }
  double operator()(double y) const { return std::exp(log_value(y)); }

 private:
  LrbKernel kernel_;
  double r_;
  EnvelopeMode mode_;
  quad::Options opt_;
  Crossovers cross_;

  void cache_crossovers() {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, HastingsKoma> || std::is_same_v<K, Exponential>) {
            cross_.t0 = detail::growth(k, r_).crossover();
          } else if constexpr (std::is_same_v<K, KappaFamily>) {
            double t = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < k.kappa.size(); ++i) t = std::min(t, detail::growth(k, i, r_).crossover());
            cross_.t0 = t;
          } else {
            cross_.t0 = k.t0(r_);
            cross_.t_prime = k.t_prime();
            if (auto x = solve_crossover(k.pow_exponent(), k.crossover_constant)) {
              double s = std::pow(r_, -1.0 / (k.gamma() + 1.0));
              cross_.y1 = x->first * s;
              cross_.y2 = x->second * s;
            }
          }
        },
        kernel_);
  }

  double log_cap_over_y(double y) const { return std::log(cap()) - std::log(y); }

  // Closed forms ------------------------------------------------------------

  /// Growth-kernel envelope. Non-linear onset: Jensen (trapezoid) bound on the
  /// convex growth segment plus the exact cap tail, simplified branchwise at
  /// y = w. Linear onset: the exact integral.
  static double log_growth_closed(const detail::Growth& g, double y) {
    const double tx = g.crossover();
    const double lcy = g.log_cap - std::log(y);
    if (tx <= 0) return lcy;
    double L;
    if (!g.linear) {
      if (y <= g.w)
        L = g.log_cap + std::log(tx + 1.0 / y) - y * tx;
      else
        L = g.log_C + g.log_A + std::log(tx + 1.0 / g.w);
    } else {
      L = log_add_exp(g.log_C + g.log_A + log_linear_onset_integral(g.w, y, tx), g.log_cap - y * tx - std::log(y));
    }
    return std::min(L, lcy);
  }

  /// log of int_0^T e^{-yt}(e^{wt} - 1) dt.
  static double log_linear_onset_integral(double w, double y, double T) {
    double a = w - y;
    if (a * T > 40.0) {
      // e^{aT}/a dominates; factor it out.
      double rest = -std::expm1(-a * T) / a - expm1_ratio(-y, T) * std::exp(-a * T);
      return a * T + std::log(rest);
    }
    double val = expm1_ratio(a, T) - expm1_ratio(-y, T);
    if (val <= 0) {
      // Cancellation for tiny wT: integrand ~ w t e^{-yt}.
      val = w * T * T / 2.0;
    }
    return std::log(val);
  }

  double log_closed(const HastingsKoma& k, double y) const { return log_growth_closed(detail::growth(k, r_), y); }
  double log_closed(const Exponential& k, double y) const { return log_growth_closed(detail::growth(k, r_), y); }
  double log_closed(const KappaFamily& k, double y) const {
    double best = log_cap_over_y(y);
    for (std::size_t i = 0; i < k.kappa.size(); ++i) best = std::min(best, log_growth_closed(detail::growth(k, i, r_), y));
    return best;
  }

  /// Sum of rigorous bounds, one per kernel piece.
  double log_closed(const AlgebraicLightcone& k, double y) const {
    const double lr = std::log(r_), tp = k.t_prime(), t0 = k.t0(r_);
    const double ta = std::min(tp, t0);
    // first piece, exact
    double L = std::log(k.c_short) - k.alpha * lr + std::log(expm1_ratio(k.v_prime - y, ta));
    if (t0 > tp) {
      const double g = k.gamma(), p = k.pow_exponent();
      auto lg = [&](double t) { return k.v * t - r_ / (k.C0 * std::pow(t, g)); };
      // exponential part of the middle piece; trapezoid needs convexity
      double lj = k.convexity_verified ? std::log((t0 - tp) / 2.0) + log_add_exp(lg(tp), lg(t0))
                                       : std::log(t0 - tp) + lg(t0);
      L = log_add_exp(L, std::log(k.c_mid_exp) - y * tp + lj);
      // power part
      double lgam = std::lgamma(p + 1.0) - (p + 1.0) * std::log(y);
      double lint = std::log((std::pow(t0, p + 1.0) - std::pow(tp, p + 1.0)) / (p + 1.0));
      if (!std::isfinite(lint)) lint = (p + 1.0) * std::log(t0) - std::log(p + 1.0);
      L = log_add_exp(L, std::log(k.c_mid_pow) - k.alpha * lr + std::min(lgam, lint));
      // floor at the first piece's t' value
      L = log_add_exp(L, std::log(k.c_short) + k.v_prime * tp - k.alpha * lr +
                             std::log(std::min(t0 - tp, 1.0 / y)) - y * tp);
    }
    L = log_add_exp(L, std::log(k.cap) - y * t0 - std::log(y));
    return std::min(L, log_cap_over_y(y));
  }

  // Numeric -----------------------------------------------------------------

  double log_numeric(double y) const {
    double T = *cross_.t0;
    double tail = std::log(cap()) - y * std::max(T, 0.0) - std::log(y);
    if (T <= 0) return tail;
    // Peaks sit at either end of [0, T] for growth kernels; geometric ladders
    // toward both ends keep narrow ones from being skipped.
    std::vector<double> breaks;
    if (cross_.t_prime && *cross_.t_prime < T) breaks.push_back(*cross_.t_prime);
    for (int j = 1; j <= 40; ++j) {
      double h = std::ldexp(T, -j);
      breaks.push_back(h);
      breaks.push_back(T - h);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::erase_if(breaks, [&](double b) { return !(b > 0 && b < T); });
    // Scale out the peak of the integrand to keep quadrature in range.
    double shift = 0.0;
    if (auto* hk = std::get_if<HastingsKoma>(&kernel_)) {
      auto g = detail::growth(*hk, r_);
      shift = g.log_C + g.log_A + std::max(0.0, (g.w - y) * T);
    } else if (auto* ex = std::get_if<Exponential>(&kernel_)) {
      auto g = detail::growth(*ex, r_);
      shift = g.log_C + g.log_A + std::max(0.0, (g.w - y) * T);
    } else {
      shift = std::log(cap());
    }
    auto f = [&](double t) {
      double lk = std::visit(
          [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, HastingsKoma> || std::is_same_v<K, Exponential>) {
              auto g = detail::growth(k, r_);
              return std::min(g.log_growth(t), g.log_cap);
            } else {
              return std::log(detail::eval(k, r_, t));
            }
          },
          kernel_);
      return std::exp(lk - y * t - shift);
    };
    auto res = quad::integrate(f, 0.0, T, breaks, opt_);
    if (res.value <= 0) return tail;
    return log_add_exp(shift + std::log(res.value), tail);
  }
};

inline double omega_bar(const OmegaBarEnvelope& env, double y) { return env(y); }

}  // namespace locbounds
