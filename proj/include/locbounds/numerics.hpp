#pragma once

// Small numerical toolbox: compensated sums, adaptive Gauss-Kronrod,
// bracketing root finder and golden-section minimizer.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include "locbounds/errors.hpp"

namespace locbounds {

/// Neumaier compensated accumulator.
template <class T = double>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, double>) {
      double t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
      else
        comp_ += (x - t) + sum_;
      sum_ = t;
    } else {
      re_.add(x.real());
      im_.add(x.imag());
    }
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const {
    if constexpr (std::is_same_v<T, double>)
      return sum_ + comp_;
    else
      return T(re_.value(), im_.value());
  }

 private:
  double sum_ = 0.0, comp_ = 0.0;
  struct Part {
    double s = 0.0, c = 0.0;
    void add(double x) {
      double t = s + x;
      c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
      s = t;
    }
    double value() const { return s + c; }
  };
  Part re_, im_;
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// (e^{a t} - 1)/a, continuous at a = 0.
inline double expm1_ratio(double a, double t) {
  double x = a * t;
  if (std::abs(x) < 1e-12) return t * (1.0 + 0.5 * x);
  return std::expm1(x) / a;
}

namespace quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Interval {
  double a, b;
  T value;
  double error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <class T, class F>
Interval<T> gk15(F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T kron = fc * wgk[7];
  T gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = h * xgk[j];
    T s = f(c - dx) + f(c + dx);
    kron += s * wgk[j];
    if (j % 2 == 1) gauss += s * wg[j / 2];
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

/// Globally adaptive G7K15 over [a,b] with optional interior breakpoints.
template <class F>
auto integrate(F&& f, double a, double b, const std::vector<double>& breaks = {},
               const Options& opt = {}) {
  using T = std::decay_t<decltype(f(a))>;
  Result<T> res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::priority_queue<detail::Interval<T>> heap;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) heap.push(detail::gk15<T>(f, pts[i], pts[i + 1]));

  auto totals = [&heap]() {
    auto copy = heap;
    CompensatedSum<T> v;
    double e = 0.0;
    while (!copy.empty()) {
      v.add(copy.top().value);
      e += copy.top().error;
      copy.pop();
    }
    return std::pair<T, double>(v.value(), e);
  };

  // Running totals, refreshed exactly every so often to avoid drift.
  auto [value, error] = totals();
  int n = static_cast<int>(heap.size());
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) && n < opt.max_intervals) {
    auto worst = heap.top();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
    if (n % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  res.value = value * sign;
  res.error = error;
  res.intervals = n;
  res.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  if (!res.converged && opt.throw_on_failure)
    throw QuadratureError("adaptive quadrature did not converge", error);
  return res;
}

}  // namespace quad

/// Bisection for a sign change of g on [a,b]. Returns nullopt without a bracket.
template <class G>
std::optional<double> bisect(G&& g, double a, double b, double xtol = 1e-14, int max_iter = 200) {
  double ga = g(a), gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if ((ga > 0) == (gb > 0)) return std::nullopt;
  for (int i = 0; i < max_iter && (b - a) > xtol * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    double m = 0.5 * (a + b);
    double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct MinimizeResult {
  double x;
  double fx;
  int iterations;
};

/// Golden-section search for a minimum of f on [a,b].
template <class F>
MinimizeResult golden_section(F&& f, double a, double b, int max_iter = 64, double xtol = 1e-10) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  for (; it < max_iter && std::abs(b - a) > xtol * (1.0 + std::abs(c) + std::abs(d)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? MinimizeResult{c, fc, it} : MinimizeResult{d, fd, it};
}

}  // namespace locbounds
