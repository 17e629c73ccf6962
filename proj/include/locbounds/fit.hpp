#pragma once

// Least-squares fits of decay exponents.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "locbounds/errors.hpp"

namespace locbounds {

enum class DecayModel { Power, Exponential };

struct DecayFit {
  double exponent;   // a in value ~ r^{-a} or e^{-a r}
  double intercept;  // ln of the prefactor
  double residual;   // rms residual of ln value
  double std_error;  // standard error of the exponent
};

/// Ordinary least squares of ln value against ln r (power) or r (exponential).
inline DecayFit fit_decay(const std::vector<std::pair<double, double>>& points, DecayModel model) {
  require(points.size() >= 2, "fit_decay: need at least two points");
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    auto [r, val] = points[i];
    require(r > 0 && val > 0, "fit_decay: points must have r > 0 and value > 0");
    A(i, 0) = 1.0;
    A(i, 1) = model == DecayModel::Power ? -std::log(r) : -r;
    b(i) = std::log(val);
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  Eigen::VectorXd res = b - A * c;
  double ss = res.squaredNorm();
  double se = 0.0;
  if (n > 2) {
    Eigen::MatrixXd cov = (A.transpose() * A).inverse() * (ss / (n - 2));
    se = std::sqrt(std::max(0.0, cov(1, 1)));
  }
  return {c(1), c(0), std::sqrt(ss / n), se};
}

/// Linear least squares y ~ sum_j c_j phi_j(x). Returns the coefficients.
inline Eigen::VectorXd fit_basis(const std::vector<double>& x, const std::vector<double>& y,
                                 const std::vector<std::function<double(double)>>& basis) {
  require(x.size() == y.size() && x.size() >= basis.size(), "fit_basis: not enough points");
  Eigen::MatrixXd A(x.size(), basis.size());
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) A(i, j) = basis[j](x[i]);
    b(i) = y[i];
  }
  return A.colPivHouseholderQr().solve(b);
}

/// Slope a of a log-bound curve
///   ln B(r) ~ c - a ln r + ln ln r + (m1 ln ln r + m0)/ln r + m2/ln^2 r,
/// the large-r form of the optimized conformal average with a linear-in-ln r t0.
inline double fit_polylog_slope(const std::vector<double>& r, const std::vector<double>& log_bound) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double lr = std::log(r[i]);
    require(lr > 1.0, "fit_polylog_slope: r must exceed e");
    x.push_back(lr);
    y.push_back(log_bound[i] - std::log(lr));
  }
  auto c = fit_basis(x, y,
                     {[](double) { return 1.0; }, [](double t) { return -t; }, [](double t) { return 1.0 / t; },
                      [](double t) { return std::log(t) / t; }, [](double t) { return 1.0 / (t * t); }});
  return c(1);
}

/// Slope a of ln B(r) ~ c - a ln r + r^{-q}(b1 ln r + b0) + b2 r^{-2q}, the
/// correction structure of the two-body lightcone pipeline with q = 1/(gamma+1).
inline double fit_lightcone_slope(const std::vector<double>& r, const std::vector<double>& log_bound, double q) {
  std::vector<double> x;
  for (double ri : r) x.push_back(std::log(ri));
  auto c = fit_basis(x, log_bound,
                     {[](double) { return 1.0; }, [](double t) { return -t; },
                      [q](double t) { return std::exp(-q * t) * t; }, [q](double t) { return std::exp(-q * t); },
                      [q](double t) { return std::exp(-2.0 * q * t); }});
  return c(1);
}

}  // namespace locbounds
