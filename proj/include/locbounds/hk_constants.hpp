#pragma once

// Conservative Hastings-Koma constants for two-body couplings with
// ||h_ij|| <= h0 / d_ij^alpha on Z^D, via the reproducing function
// F(r) = (1 + r)^{-alpha}:
//   ||F||   = sup_x sum_y F(d(x,y))            (lattice sum, upper bound)
//   C_F     = 2^{alpha+1} ||F||                (reproducing constant)
//   ||Phi|| <= 2^alpha h0                      (on-site terms do not enter)
//   ||[A(t),B]|| <= (2||A|| ||B||/C_F)(e^{2||Phi|| C_F t} - 1) sum F(d_xy)
// so v = 2 ||Phi|| C_F and C = 2||A|| ||B|| |X| |Y| / C_F, cap = 2||A|| ||B||.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "locbounds/bound_kernels.hpp"
#include "locbounds/errors.hpp"
#include "locbounds/numerics.hpp"

namespace locbounds {

enum class LatticeMetric { Graph, Euclidean };

struct HkConstants {
  double h0 = 0.0;
  double alpha = 0.0;
  int D = 1;
  double f_norm = 0.0;
  double reproducing_constant = 0.0;
  double interaction_norm = 0.0;
  double C = 0.0;
  double v = 0.0;
  double cap = 0.0;
  std::string formula;

  /// Linear-onset HastingsKoma kernel; requires h0 > 0.
  HastingsKoma to_kernel() const {
    require(v > 0 && C > 0, "HkConstants: a free system has no growing kernel");
    return HastingsKoma{C, v, alpha, D, cap, true};
  }
};

/// Upper bound on sum_{k in Z^D} (1 + |k|)^{-alpha}: exact box sum with
/// |k|_inf <= M plus the shell tail D 2^D (1+M)^{D-alpha}/(alpha-D).
inline double power_law_lattice_norm(double alpha, int D, LatticeMetric metric = LatticeMetric::Graph) {
  require(D >= 1 && D <= 3, "power_law_lattice_norm: D must be 1, 2 or 3");
  require(alpha > D, "power_law_lattice_norm: alpha must exceed D");
  const int M = D == 1 ? 2000000 : (D == 2 ? 1500 : 120);
  CompensatedSum<> s;
  if (D == 1) {
    s.add(1.0);
    for (int n = M; n >= 1; --n) s.add(2.0 * std::pow(1.0 + n, -alpha));
  } else {
    auto dist = [&](const std::vector<int>& k) {
      if (metric == LatticeMetric::Graph) {
        double d = 0;
        for (int c : k) d += std::abs(c);
        return d;
      }
      double d2 = 0;
      for (int c : k) d2 += double(c) * c;
      return std::sqrt(d2);
    };
    std::vector<int> k(D, -M);
    while (true) {
      s.add(std::pow(1.0 + dist(k), -alpha));
      int i = 0;
      while (i < D && ++k[i] > M) k[i++] = -M;
      if (i == D) break;
    }
  }
  double tail = D * std::ldexp(1.0, D) * std::pow(1.0 + M, D - alpha) / (alpha - D);
  return s.value() + tail;
}

/// Constants for unit-norm single-site observables unless norms/support sizes are given.
inline HkConstants derive_hk_constants(double h0, double alpha, int D, double norm_s = 1.0, double norm_v = 1.0,
                                       double support_product = 1.0,
                                       LatticeMetric metric = LatticeMetric::Graph) {
  require(D >= 1, "derive_hk_constants: D must be a positive integer");
  require(alpha > D, "derive_hk_constants: alpha must exceed D (lattice series diverges)");
  require(h0 >= 0, "derive_hk_constants: h0 must be nonnegative");
  HkConstants c;
  c.h0 = h0;
  c.alpha = alpha;
  c.D = D;
  c.f_norm = power_law_lattice_norm(alpha, D, metric);
  c.reproducing_constant = std::pow(2.0, alpha + 1.0) * c.f_norm;
  c.interaction_norm = std::pow(2.0, alpha) * h0;
  c.v = 2.0 * c.interaction_norm * c.reproducing_constant;
  c.cap = 2.0 * norm_s * norm_v;
  c.C = h0 > 0 ? c.cap * support_product / c.reproducing_constant : 0.0;
  std::ostringstream f;
  f << "F(r)=(1+r)^-alpha; ||F||=sum_{Z^D}F(|k|) (box sum + shell tail); C_F=2^(alpha+1)||F||; "
       "||Phi||_F<=2^alpha h0; v=2||Phi||_F C_F; C=2||S|| ||V|| |X||Y|/C_F; "
       "C(r,t)=min(C(e^{vt}-1)/r^alpha, 2||S|| ||V||)";
  c.formula = f.str();
  return c;
}

}  // namespace locbounds
