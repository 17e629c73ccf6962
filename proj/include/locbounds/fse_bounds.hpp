#pragma once

// Finite-size error bounds: power-law convolution sums, their asymptotic
// class, the alpha3 case table, and the 1D / sphere evaluations.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "locbounds/errors.hpp"
#include "locbounds/numerics.hpp"

namespace locbounds {

/// P(x) = sum_k c_k x^k with c_k >= 0.
inline double eval_poly(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

inline int poly_degree(const std::vector<double>& c) {
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (c[k] != 0.0) return k;
  return 0;
}

inline void validate_poly(const std::vector<double>& c) {
  require(!c.empty(), "polynomial must have at least one coefficient");
  for (double x : c) require(x >= 0 && std::isfinite(x), "polynomial coefficients must be nonnegative");
}

struct ConvolutionSpec {
  long long R = 2;
  double zeta = 1.0;
  double eta = 1.0;
  std::vector<double> poly{1.0};
};

inline void validate(const ConvolutionSpec& s) {
  require(s.R >= 2, "ConvolutionSpec: R must be >= 2");
  require(s.eta > 0 && s.eta <= s.zeta, "ConvolutionSpec: need 0 < eta <= zeta");
  validate_poly(s.poly);
}

namespace detail {

/// sum_{r=1}^{R-1} P(ln r) r^{-a} (R-r)^{-b}, any real a, b.
inline double convolution_sum(long long R, double a, double b, const std::vector<double>& poly) {
  CompensatedSum<> s;
  for (long long r = 1; r < R; ++r) {
    double lr = std::log(double(r));
    s.add(eval_poly(poly, lr) * std::exp(-a * lr - b * std::log(double(R - r))));
  }
  return s.value();
}

}  // namespace detail

/// Direct summation of sum_{r=1}^{R-1} P(ln r)/(r^zeta (R-r)^eta).
inline double convolution_sum_exact(const ConvolutionSpec& spec) {
  validate(spec);
  return detail::convolution_sum(spec.R, spec.zeta, spec.eta, spec.poly);
}

struct AsymptoticClass {
  double class_exponent;  // R^{class_exponent}
  int log_power;          // extra powers of ln R from a borderline exponent
  int envelope_degree;    // deg P + log_power
  bool first_case;        // zeta >= 1 (R^{-eta}) versus zeta < 1 (R^{1-eta-zeta})
  std::string label;
};

namespace detail {

/// Splitting the sum at R/2, the two halves behave as
///   R^{-b} sum r^{-a}  ->  R^{-b + max(0, 1-a)}, ln R when a = 1
///   R^{-a} sum r^{-b}  ->  R^{-a + max(0, 1-b)}, ln R when b = 1
/// and the sum follows the larger one.
inline AsymptoticClass convolution_class(double a, double b, int deg) {
  double e1 = -b + std::max(0.0, 1.0 - a), e2 = -a + std::max(0.0, 1.0 - b);
  int l1 = a == 1.0 ? 1 : 0, l2 = b == 1.0 ? 1 : 0;
  AsymptoticClass c{};
  const double tie = 1e-14;
  if (e1 > e2 + tie) {
    c.class_exponent = e1;
    c.log_power = l1;
  } else if (e2 > e1 + tie) {
    c.class_exponent = e2;
    c.log_power = l2;
  } else {
    c.class_exponent = e1;
    c.log_power = std::max(l1, l2);
  }
  c.envelope_degree = deg + c.log_power;
  c.first_case = std::max(a, b) >= 1.0;
  return c;
}

}  // namespace detail

inline AsymptoticClass convolution_asymptotic(const ConvolutionSpec& spec) {
  validate(spec);
  auto c = detail::convolution_class(spec.zeta, spec.eta, poly_degree(spec.poly));
  c.label = spec.zeta >= 1.0 ? "R^{-eta}" : "R^{1-eta-zeta}";
  if (c.log_power > 0) c.label += " * ln R";
  return c;
}

/// P(ln R) (ln R)^{log_power} R^{class_exponent}.
inline double convolution_asymptotic_value(const ConvolutionSpec& spec) {
  auto c = convolution_asymptotic(spec);
  double lR = std::log(double(spec.R));
  return eval_poly(spec.poly, lR) * std::pow(lR, c.log_power) * std::exp(c.class_exponent * lR);
}

struct Alpha3Result {
  double value;
  std::string branch;
  bool at_boundary = false;   // alpha == D + 1, both formulas evaluated
  double other_branch = 0.0;  // the alpha > D+1 formula at the boundary
};

/// Finite-size exponent from the case table:
///   two-body alpha > 2D : alpha - D
///   alpha > D + 1       : min(alpha - D, alpha1 + 1 - D)
///   D < alpha <= D + 1  : alpha - D if alpha1 > D, else alpha1 + alpha - 2D
inline Alpha3Result alpha3(double alpha, double alpha1, int D, bool two_body = false) {
  require(D >= 1, "alpha3: D must be a positive integer");
  require(alpha > D, "alpha3: alpha must exceed D");
  require(alpha1 > 0, "alpha3: alpha1 must be positive");
  if (two_body && alpha > 2.0 * D) return {alpha - D, "two-body alpha>2D"};
  auto upper = [&] { return std::min(alpha - D, alpha1 + 1.0 - D); };
  auto lower = [&] { return alpha1 > D ? alpha - D : alpha1 + alpha - 2.0 * D; };
  if (alpha > D + 1.0) return {upper(), "alpha>D+1"};
  Alpha3Result r{lower(), alpha1 > D ? "D<alpha<=D+1, alpha1>D" : "D<alpha<=D+1, alpha1<=D"};
  if (alpha == D + 1.0) {
    r.at_boundary = true;
    r.other_branch = upper();
  }
  return r;
}

inline double mu3_exponential(double mu1) { return mu1; }

enum class FseMode { Exact, Asymptotic };

/// 1D bound with R = L/2:
///   sum_{i=1}^{R+1} P(ln i) i^{-alpha1} (R+2-i)^{1-alpha}
/// Asymptotic mode evaluates the class of this convolution at R' = R + 2.
inline double fse_bound_1d(long long L, double alpha, double alpha1, const std::vector<double>& poly,
                           FseMode mode = FseMode::Exact) {
  require(L >= 2 && L % 2 == 0, "fse_bound_1d: L must be an even integer >= 2");
  require(alpha > 1.0, "fse_bound_1d: alpha must exceed 1");
  require(alpha1 > 0, "fse_bound_1d: alpha1 must be positive");
  validate_poly(poly);
  const long long Rp = L / 2 + 2;
  if (mode == FseMode::Exact) return detail::convolution_sum(Rp, alpha1, alpha - 1.0, poly);
  auto c = detail::convolution_class(alpha1, alpha - 1.0, poly_degree(poly));
  double lR = std::log(double(Rp));
  return eval_poly(poly, lR) * std::pow(lR, c.log_power) * std::exp(c.class_exponent * lR);
}

inline AsymptoticClass fse_class_1d(double alpha, double alpha1, const std::vector<double>& poly) {
  return detail::convolution_class(alpha1, alpha - 1.0, poly_degree(poly));
}

struct SphereFse {
  double exact;                // sum_{r1=1}^{R-1} P(ln r1)/(r1^{alpha1-D+1} (R-r1)^{alpha-D})
  AsymptoticClass asymptotic;  // class of that sum
  double asymptotic_value;
  double shell_tail_constant;  // A: sum_{|k|_inf >= m} |k|^{-alpha} <= A m^{D-alpha}
  double shell_count_constant; // c_D: #{|k|_inf = j} <= c_D (j+1)^{D-1}
  double absorbed_constant;    // A * c_D, kept out of P
};

namespace detail {

inline double shell_count(long long n, int D) {
  if (n == 0) return 1.0;
  return std::pow(2.0 * n + 1.0, D) - std::pow(2.0 * n - 1.0, D);
}

/// sup_{m >= 1} m^{alpha-D} sum_{n >= m} shell(n) n^{-alpha}.
inline double shell_tail_constant(double alpha, int D) {
  const long long M = 200, N = 200000;
  auto f = [&](double n) { return 2.0 * D * std::pow(2.0 * n + 1.0, D - 1) * std::pow(n, -alpha); };
  auto tail_from = [&](double m) {  // f(m) + int_m^inf f, f decreasing
    return f(m) + 2.0 * D * std::pow(2.0 + 1.0 / m, D - 1) * std::pow(m, D - alpha) / (alpha - D);
  };
  // exact partial sums for n in [m, N), tail bound from N on
  CompensatedSum<> acc;
  acc.add(tail_from(double(N)));
  double best = 0.0;
  for (long long n = N - 1; n >= 1; --n) {
    acc.add(shell_count(n, D) * std::pow(double(n), -alpha));
    if (n <= M) best = std::max(best, acc.value() * std::pow(double(n), alpha - D));
  }
  double beyond = (2.0 * D * std::pow(2.0 * (M + 1) + 1.0, D - 1) * std::pow(double(M + 1), -double(D)) +
                   2.0 * D * std::pow(2.0 + 1.0 / (M + 1), D - 1) / (alpha - D));
  return std::max(best, beyond);
}

inline double shell_count_constant(int D) {
  if (D == 1) return 2.0;
  double best = 1.0;
  for (long long j = 0; j <= 100000; ++j) best = std::max(best, shell_count(j, D) / std::pow(j + 1.0, D - 1));
  return std::max(best, D * std::pow(2.0, D));
}

}  // namespace detail

/// Radial reduction for a cube-shaped block of half-width R - 2 around X:
/// the double lattice sum over r1 inside and r2 outside is at most
/// absorbed_constant * exact.
inline SphereFse fse_bound_sphere(long long R, double alpha, double alpha1, int D, const std::vector<double>& poly) {
  require(R >= 2, "fse_bound_sphere: R must be >= 2");
  require(D >= 1, "fse_bound_sphere: D must be a positive integer");
  require(alpha > D, "fse_bound_sphere: alpha must exceed D");
  require(alpha1 > 0, "fse_bound_sphere: alpha1 must be positive");
  validate_poly(poly);
  SphereFse s{};
  const double a = alpha1 - D + 1.0, b = alpha - D;
  s.exact = detail::convolution_sum(R, a, b, poly);
  s.asymptotic = detail::convolution_class(a, b, poly_degree(poly));
  double lR = std::log(double(R));
  s.asymptotic_value = eval_poly(poly, lR) * std::pow(lR, s.asymptotic.log_power) * std::exp(s.asymptotic.class_exponent * lR);
  s.shell_tail_constant = detail::shell_tail_constant(alpha, D);
  s.shell_count_constant = detail::shell_count_constant(D);
  s.absorbed_constant = s.shell_tail_constant * s.shell_count_constant;
  return s;
}

}  // namespace locbounds
