#pragma once

// Exact response quantities on small instances: ground-space averages, the
// spectral and time-integral forms of Omega, the lambda-derivative identity,
// the degenerate-block basis, connected correlations and the gap along the
// interpolation path.
//
// Conventions: ground space G = lowest d states of H, <O> = (1/d) sum_a <a|O|a>.
//   Omega(w) = <S (i Pbar/(w - Hhat)) V> - <V (i Pbar/(w + Hhat)) S>,
// Hhat = H - E_a, Pbar the projector off G. With eps = E_n - E_a,
// A = <a|S|n><n|V|a>, B = <a|V|n><n|S|a>:
//   Omega(w) = (1/d) sum_{a, n not in G} [i A/(w - eps) - i B/(w + eps)].

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "locbounds/ed/operators.hpp"
#include "locbounds/ed/spectrum.hpp"
#include "locbounds/errors.hpp"
#include "locbounds/numerics.hpp"

namespace locbounds::ed {

/// (1/d) sum_a <a|O|a>
inline cplx ground_average(const SpectralData& s, const SparseMatrix& O) {
  cplx acc = 0.0;
  for (int a = 0; a < s.d; ++a) acc += s.vectors.col(a).dot(O * s.vectors.col(a));
  return acc / double(s.d);
}

struct DeltaExpectation {
  double value;   // <S>_{H+V} - <S>_H
  double before;
  double after;
  int d;
  double gap_before;
  double gap_after;
};

/// d is detected on H and held fixed for H + V.
inline DeltaExpectation delta_expectation(const OperatorSum& H, const OperatorSum& V, const OperatorSum& S,
                                          SpectrumOptions opt = {}) {
  auto s0 = spectrum(H, opt.ground_dim ? *opt.ground_dim + 1 : 3, opt);
  opt.ground_dim = s0.d;
  const SparseMatrix Sm = S.to_sparse();
  double before = ground_average(s0, Sm).real();
  if (V.empty()) return {0.0, before, before, s0.d, s0.gap, s0.gap};
  auto s1 = spectrum((H + V).to_sparse(), s0.d + 1, opt);
  double after = ground_average(s1, Sm).real();
  return {after - before, before, after, s0.d, s0.gap, s1.gap};
}

/// Spectral data for Omega. Needs the full spectrum.
class SpectralResponse {
 public:
  SpectralResponse(const SpectralData& s, const SparseMatrix& S, const SparseMatrix& V) : d_(s.d) {
    require(s.full, "SpectralResponse: needs a full spectral decomposition");
    const Eigen::Index n = s.vectors.cols();
    DenseMatrix Sn = s.vectors.adjoint() * (S * s.vectors);  // <m|S|n>
    DenseMatrix Vn = s.vectors.adjoint() * (V * s.vectors);
    gap_ = s.gap;
    for (int a = 0; a < d_; ++a)
      for (Eigen::Index m = d_; m < n; ++m) {
        eps_.push_back(s.energies(m) - s.energies(a));
        A_.push_back(Sn(a, m) * Vn(m, a));
        B_.push_back(Vn(a, m) * Sn(m, a));
      }
    for (double e : eps_) eps_max_ = std::max(eps_max_, e);
    eps_min_ = eps_.empty() ? gap_ : *std::min_element(eps_.begin(), eps_.end());
    // <S V> - sum_{a,b in G} <a|S|b><b|V|a>, averaged
    cplx c = 0.0;
    for (int a = 0; a < d_; ++a)
      for (Eigen::Index m = d_; m < n; ++m) c += Sn(a, m) * Vn(m, a);
    projected_ = c / double(d_);
  }

  int d() const { return d_; }
  double eps_min() const { return eps_min_; }
  double eps_max() const { return eps_max_; }

  /// Throws DomainError on K_Delta = {real w, |w| >= eps_min}.
  cplx omega(cplx w) const {
    const double tol = 1e-12 * std::max(1.0, eps_max_);
    if (std::abs(w.imag()) <= tol && std::abs(w.real()) >= eps_min_ - tol)
      throw DomainError("omega_spectral: argument lies on the excluded real set |Re w| >= Delta");
    const cplx I(0.0, 1.0);
    CompensatedSum<cplx> acc;
    for (std::size_t k = 0; k < eps_.size(); ++k) acc.add(I * A_[k] / (w - eps_[k]) - I * B_[k] / (w + eps_[k]));
    return acc.value() / double(d_);
  }

  /// Laurent coefficients of Omega(i y) = sum_k m_k / y^{k+1} for |y| > eps_max,
  /// divided by Y^k.
  cplx scaled_moment(int k, double Y) const {
    const cplx I(0.0, 1.0);
    CompensatedSum<cplx> acc;
    for (std::size_t j = 0; j < eps_.size(); ++j) {
      cplx x = I * (eps_[j] / Y);
      acc.add(A_[j] * std::pow(-x, k) - B_[j] * std::pow(x, k));
    }
    return acc.value() / double(d_);
  }

  /// (1/d) sum_a <a|S Pbar V|a>
  cplx projected_correlation() const { return projected_; }

 private:
  int d_;
  double gap_ = 0.0, eps_min_ = 0.0, eps_max_ = 0.0;
  std::vector<double> eps_;
  std::vector<cplx> A_, B_;
  cplx projected_ = 0.0;
};

inline cplx omega_spectral(const SpectralData& s, const SparseMatrix& S, const SparseMatrix& V, cplx w) {
  return SpectralResponse(s, S, V).omega(w);
}

struct TimeIntegral {
  cplx value;
  double horizon;     // T
  double tail_bound;  // 2 ||S|| ||V|| e^{-|Im w| T} / |Im w|
  double quad_error;
};

/// int_0^{eta inf} <[S(t), V]> e^{i w t} dt, eta = sgn Im w, truncated at
/// |t| = T. S(t) = e^{iHt} S e^{-iHt} is applied through the eigenbasis:
///   <a|S(t) V|a> = e^{i E_a t} <S^dag a| U e^{-iEt} U^dag V a>.
/// Without T, the horizon is chosen so that the tail bound is below tail_tol.
inline TimeIntegral omega_time_integral(const SpectralData& s, const SparseMatrix& S, const SparseMatrix& V, cplx w,
                                        std::optional<double> T = std::nullopt, double tail_tol = 1e-10,
                                        double rel_tol = 1e-11) {
  require(s.full, "omega_time_integral: needs a full spectral decomposition");
  const double y = std::abs(w.imag());
  require(y > 0, "omega_time_integral: Im w must be nonzero");
  const double norm_s = hermitian_norm(DenseMatrix(S)), norm_v = hermitian_norm(DenseMatrix(V));
  const double pref = 2.0 * norm_s * norm_v / y;
  double horizon = T ? *T : (pref > tail_tol ? std::log(pref / tail_tol) / y : 1.0 / y);
  require(horizon > 0, "omega_time_integral: horizon must be positive");
  const double eta = w.imag() > 0 ? 1.0 : -1.0;
  const Eigen::Index n = s.vectors.rows();
  const int d = s.d;
  const DenseMatrix& U = s.vectors;
  std::vector<Vector> w_coef, s_dag, s_a;
  for (int a = 0; a < d; ++a) {
    Vector ga = U.col(a);
    w_coef.push_back(U.adjoint() * (V * ga));
    s_dag.push_back(SparseMatrix(S.adjoint()) * ga);
    s_a.push_back(S * ga);
  }
  const cplx I(0.0, 1.0);
  Vector phase(n), chi(n);
  auto integrand = [&](double tau) {  // t = eta * tau, dt = eta d tau
    double t = eta * tau;
    for (Eigen::Index m = 0; m < n; ++m) phase(m) = std::exp(-I * (s.energies(m) * t));
    cplx c = 0.0;
    for (int a = 0; a < d; ++a) {
      chi.noalias() = U * phase.cwiseProduct(w_coef[a]);
      cplx ea = std::exp(I * (s.energies(a) * t));
      c += ea * s_dag[a].dot(chi) - std::conj(ea) * chi.dot(s_a[a]);
    }
    return eta * (c / double(d)) * std::exp(I * w * t);
  };
  // panels a few oscillation periods long
  const double span = s.energies(n - 1) - s.energies(0) + std::abs(w.real());
  const double panel = span > 0 ? std::min(1.0 / y, 4.0 * std::numbers::pi / span) : horizon;
  std::vector<double> breaks;
  for (double b = panel; b < horizon && breaks.size() < 20000; b += panel) breaks.push_back(b);
  auto res = quad::integrate(integrand, 0.0, horizon, breaks, {rel_tol, 1e-15, 200000, false});
  return {res.value, horizon, pref * std::exp(-y * horizon), res.error};
}

struct AxisIdentity {
  cplx axis_integral;     // (1/2pi) int_{-i inf}^{i inf} Omega(w) dw
  cplx correlation;       // (1/d) sum_a <a|S Pbar V|a>
  double residual;
  double quad_error;
};

/// Axis integral of Omega against the projected connected correlation.
/// Numeric on |y| <= Y = 20 eps_max, Laurent tail beyond.
inline AxisIdentity axis_integral_identity(const SpectralResponse& r) {
  const double Y = 20.0 * std::max(r.eps_max(), 1e-12);
  auto f = [&](double y) { return r.omega(cplx(0.0, y)) + r.omega(cplx(0.0, -y)); };
  std::vector<double> breaks;
  for (double b = r.eps_min() / 8; b < Y; b *= 2) breaks.push_back(b);
  auto res = quad::integrate(f, 0.0, Y, breaks, {1e-13, 1e-15, 20000, false});
  cplx tail = 0.0;
  // int_{|y|>Y} y^{-(k+1)} dy vanishes for even k
  for (int k = 1; k <= 61; k += 2) tail += 2.0 * r.scaled_moment(k, Y) / double(k);
  // int Omega dw with w = i y, dw = i dy
  cplx total = cplx(0.0, 1.0) * (res.value + tail);
  cplx axis = total / (2.0 * std::numbers::pi);
  cplx corr = r.projected_correlation();
  return {axis, corr, std::abs(axis - corr), res.error / (2.0 * std::numbers::pi)};
}

struct DerivativeCheck {
  double lambda;
  double step;
  double fd_h;         // central difference with step h
  double fd_h2;        // with step h/2
  double richardson;   // (4 fd_h2 - fd_h)/3
  double rhs;          // -i Omega(0)
  double residual;     // |richardson - rhs|
  double order_ratio;  // |fd_h - rhs| / |fd_h2 - rhs|, about 4 for a second-order difference
  double flipped_sign_residual;  // |richardson - i Omega(0)|
  bool passed;
};

/// Finite-difference derivative of <S>_lambda for H + lambda V versus the
/// perturbation-theory value -i Omega_lambda(0). The ground-space dimension is
/// taken at lambda and held fixed at the displaced points.
inline DerivativeCheck dlambda_identity_check(const OperatorSum& H, const OperatorSum& V, const OperatorSum& S,
                                              double lambda, double h = 1e-2, SpectrumOptions opt = {},
                                              double tol = 1e-7) {
  const SparseMatrix Hm = H.to_sparse(), Vm = V.to_sparse(), Sm = S.to_sparse();
  opt.dense_cap = std::max<std::int64_t>(opt.dense_cap, Hm.rows());
  auto at = [&](double lam) -> SparseMatrix { return Hm + lam * Vm; };
  auto s = spectrum(at(lambda), 1, opt);
  opt.ground_dim = s.d;
  auto expect = [&](double lam) { return ground_average(spectrum(at(lam), 1, opt), Sm).real(); };
  double fd_h = (expect(lambda + h) - expect(lambda - h)) / (2 * h);
  double fd_h2 = (expect(lambda + h / 2) - expect(lambda - h / 2)) / h;
  double rich = (4 * fd_h2 - fd_h) / 3;
  cplx om = SpectralResponse(s, Sm, Vm).omega(0.0);
  double rhs = (cplx(0.0, -1.0) * om).real();
  DerivativeCheck c{lambda, h, fd_h, fd_h2, rich, rhs, std::abs(rich - rhs), 0.0,
                    std::abs(rich - (cplx(0.0, 1.0) * om).real()), false};
  double e1 = std::abs(fd_h - rhs), e2 = std::abs(fd_h2 - rhs);
  c.order_ratio = e2 > 0 ? e1 / e2 : std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, std::abs(rhs));
  const double noise = 1e-9 * scale;
  bool second_order = e1 < noise || (c.order_ratio > 2.5 && c.order_ratio < 6.0);
  c.passed = c.residual <= tol * scale && second_order;
  return c;
}

struct DegenerateBasis {
  DenseMatrix basis;       // rotated ground vectors (columns)
  Eigen::VectorXd energies;
  std::vector<int> group;  // exact-degeneracy group of each ground vector
  DenseMatrix Q;           // Q(a,b) = <b|V|a>/(E_b - E_a), zero within a group
  double anti_hermitian_residual;  // max |conj Q(a,b) + Q(b,a)|
  double v_offdiag_residual;       // max |<a|V|b>| within a group, a != b
};

/// Within each exactly degenerate group (energies within tol) of the ground
/// space, rotates to the eigenbasis of V restricted to the group.
inline DegenerateBasis degenerate_block_basis(const SpectralData& s, const SparseMatrix& V,
                                              std::optional<double> tol = std::nullopt) {
  const int d = s.d;
  const double t = tol ? *tol : 1e-12 * std::max(1.0, s.h_norm);
  DegenerateBasis out;
  out.basis = s.vectors.leftCols(d);
  out.energies = s.energies.head(d);
  out.group.assign(d, 0);
  int g = 0;
  for (int a = 1; a < d; ++a) {
    if (s.energies(a) - s.energies(a - 1) > t) ++g;
    out.group[a] = g;
  }
  for (int start = 0; start < d;) {
    int end = start;
    while (end < d && out.group[end] == out.group[start]) ++end;
    const int m = end - start;
    if (m > 1) {
      DenseMatrix blk = out.basis.middleCols(start, m).adjoint() * (V * out.basis.middleCols(start, m));
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (blk + blk.adjoint()));
      DenseMatrix rot = out.basis.middleCols(start, m) * es.eigenvectors();
      out.basis.middleCols(start, m) = rot;
    }
    start = end;
  }
  DenseMatrix Vg = out.basis.adjoint() * (V * out.basis);
  out.Q = DenseMatrix::Zero(d, d);
  out.v_offdiag_residual = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (out.group[a] == out.group[b]) {
        if (a != b) out.v_offdiag_residual = std::max(out.v_offdiag_residual, std::abs(Vg(a, b)));
        continue;
      }
      out.Q(a, b) = Vg(b, a) / (out.energies(b) - out.energies(a));
    }
  out.anti_hermitian_residual = (out.Q.conjugate() + out.Q.transpose()).cwiseAbs().maxCoeff();
  return out;
}

/// <A B> - <A><B> under the ground-space average.
inline cplx connected_correlation(const SpectralData& s, const SparseMatrix& A, const SparseMatrix& B) {
  return ground_average(s, A * B) - ground_average(s, A) * ground_average(s, B);
}

/// (1/d) sum_a <a|A Pbar B|a>; equals the connected correlation when d = 1.
inline cplx projected_correlation(const SpectralData& s, const SparseMatrix& A, const SparseMatrix& B) {
  DenseMatrix G = s.vectors.leftCols(s.d);
  DenseMatrix Ag = G.adjoint() * (A * G), Bg = G.adjoint() * (B * G);
  cplx inner = (Ag * Bg).trace() / double(s.d);
  return ground_average(s, A * B) - inner;
}

struct PathPoint {
  double lambda;
  double gap;
  double weyl_bound;  // Delta(0) - 2 lambda ||V||
  bool weyl_violated;
};

struct PathReport {
  double delta_min;
  double v_norm;
  int d;
  std::vector<PathPoint> points;
  bool weyl_ok;
  bool gapped;  // every point resolved with gap above 10x the degeneracy tolerance
};

/// Gap of H + lambda V over the grid with d fixed from lambda = 0.
inline PathReport gap_along_path(const OperatorSum& H, const OperatorSum& V, const std::vector<double>& grid,
                                 SpectrumOptions opt = {}) {
  require(!grid.empty(), "gap_along_path: empty lambda grid");
  for (double l : grid) require(l >= 0 && l <= 1, "gap_along_path: lambda must lie in [0,1]");
  const SparseMatrix Hm = H.to_sparse(), Vm = V.to_sparse();
  auto s0 = spectrum(Hm, opt.ground_dim ? *opt.ground_dim + 1 : 3, opt);
  opt.ground_dim = s0.d;
  PathReport rep{std::numeric_limits<double>::infinity(), V.empty() ? 0.0 : support_norm(V), s0.d, {}, true, true};
  for (double l : grid) {
    auto s = l == 0.0 ? s0 : spectrum(SparseMatrix(Hm + l * Vm), s0.d + 1, opt);
    double weyl = s0.gap - 2.0 * l * rep.v_norm;
    bool viol = s.gap < weyl - 1e-10 * std::max(1.0, s.h_norm);
    rep.points.push_back({l, s.gap, weyl, viol});
    rep.delta_min = std::min(rep.delta_min, s.gap);
    rep.weyl_ok = rep.weyl_ok && !viol;
    rep.gapped = rep.gapped && !s.ambiguous;
  }
  return rep;
}

}  // namespace locbounds::ed
