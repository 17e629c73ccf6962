#pragma once

// Lowest eigenpairs, ground-space dimension and gap.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "locbounds/ed/operators.hpp"
#include "locbounds/errors.hpp"

namespace locbounds::ed {

struct SpectrumOptions {
  std::int64_t dense_cap = 2048;   // dense solve up to this dimension
  double degeneracy_rel = 1e-9;    // cluster tolerance relative to ||H||
  std::optional<int> ground_dim;   // fix d instead of detecting it
  double lanczos_tol = 1e-12;      // residual, relative to ||H||
  int lanczos_max_steps = 400;
  std::uint64_t seed = 12345;
};

struct SpectralData {
  Eigen::VectorXd energies;  // ascending
  DenseMatrix vectors;       // columns
  bool full = false;         // every eigenpair present
  double h_norm = 0.0;
  double tolerance = 0.0;    // degeneracy tolerance used
  int d = 1;
  double gap = 0.0;          // E_d - E_{d-1} (0-based)
  bool ambiguous = false;    // gap below 10x tolerance

  double ground_energy() const { return energies(0); }
  auto ground_vectors() const { return vectors.leftCols(d); }
};

namespace detail {

inline void finish(SpectralData& s, const SpectrumOptions& opt) {
  s.tolerance = opt.degeneracy_rel * std::max(s.h_norm, 1e-300);
  const int n = static_cast<int>(s.energies.size());
  if (opt.ground_dim) {
    require(*opt.ground_dim >= 1 && *opt.ground_dim <= n, "spectrum: ground_dim out of range");
    s.d = *opt.ground_dim;
  } else {
    s.d = 1;
    while (s.d < n && s.energies(s.d) - s.energies(0) <= s.tolerance) ++s.d;
  }
  if (s.d < n) {
    s.gap = s.energies(s.d) - s.energies(s.d - 1);
    s.ambiguous = s.gap < 10.0 * s.tolerance;
  } else {
    s.gap = std::numeric_limits<double>::infinity();
    s.ambiguous = true;
  }
}

/// Lowest eigenpair of H restricted to the orthogonal complement of `lock`,
/// by Lanczos with full reorthogonalization. Returns (value, vector) and the
/// extreme Ritz values seen, for the norm estimate.
struct LanczosOut {
  double value;
  Vector vec;
  double ritz_min, ritz_max;
};

inline LanczosOut lanczos_lowest(const SparseMatrix& H, const std::vector<Vector>& lock, double h_scale,
                                 const SpectrumOptions& opt, std::mt19937_64& rng) {
  const Eigen::Index n = H.rows();
  std::normal_distribution<double> g;
  auto project = [&](Vector& x) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : lock) x -= u * u.dot(x);
  };
  Vector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = cplx(g(rng), g(rng));
  project(q);
  q.normalize();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(opt.lanczos_max_steps, n - Eigen::Index(lock.size())));
  DenseMatrix Q(n, m_max);
  std::vector<double> a, b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int j = 0; j < m_max; ++j) {
    Q.col(j) = q;
    Vector w = H * q;
    double aj = q.dot(w).real();
    w -= aj * q;
    if (j > 0) w -= b[j - 1] * Q.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).adjoint() * w);
      project(w);
    }
    a.push_back(aj);
    double bj = w.norm();
    const int m = j + 1;
    bool check = (m % 10 == 0) || m == m_max || bj < 1e-14 * h_scale;
    if (check) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int k = 0; k < m; ++k) {
        T(k, k) = a[k];
        if (k + 1 < m) T(k, k + 1) = T(k + 1, k) = b[k];
      }
      es.compute(T);
      double resid = bj * std::abs(es.eigenvectors()(m - 1, 0));
      if (resid <= opt.lanczos_tol * h_scale || bj < 1e-14 * h_scale || m == m_max) {
        if (resid > 1e-8 * h_scale) throw SolverError("Lanczos did not converge");
        Vector v = Q.leftCols(m) * es.eigenvectors().col(0).cast<cplx>();
        project(v);
        v.normalize();
        return {es.eigenvalues()(0), v, es.eigenvalues()(0), es.eigenvalues()(m - 1)};
      }
    }
    b.push_back(bj);
    q = w / bj;
  }
  throw SolverError("Lanczos: empty Krylov space");
}

}  // namespace detail

/// Lowest k eigenpairs. Dense Hermitian solve up to opt.dense_cap, otherwise
/// k successive deflated Lanczos runs (which also resolves exact degeneracies).
inline SpectralData spectrum(const SparseMatrix& H, int k, const SpectrumOptions& opt = {}) {
  require(H.rows() == H.cols() && H.rows() >= 1, "spectrum: H must be square");
  require(k >= 1, "spectrum: k must be positive");
  require(is_hermitian(H), "spectrum: H is not Hermitian");
  SpectralData s;
  const Eigen::Index n = H.rows();
  if (n <= opt.dense_cap) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es{DenseMatrix(H)};
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
    s.h_norm = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
    s.energies = es.eigenvalues();
    s.vectors = es.eigenvectors();
    s.full = true;
    detail::finish(s, opt);
    return s;
  }
  // ||H|| <= max row sum bounds the scale for the residual test.
  double h_scale = 0.0;
  {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < H.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(H, c); it; ++it) rows(it.row()) += std::abs(it.value());
    h_scale = std::max(rows.maxCoeff(), 1e-300);
  }
  std::mt19937_64 rng(opt.seed);
  std::vector<Vector> lock;
  std::vector<double> vals;
  double ritz_max = -std::numeric_limits<double>::infinity(), ritz_min = std::numeric_limits<double>::infinity();
  const int want = static_cast<int>(std::min<Eigen::Index>(k, n));
  for (int i = 0; i < want; ++i) {
    auto out = detail::lanczos_lowest(H, lock, h_scale, opt, rng);
    vals.push_back(out.value);
    lock.push_back(out.vec);
    ritz_max = std::max(ritz_max, out.ritz_max);
    ritz_min = std::min(ritz_min, out.ritz_min);
  }
  // Deflated runs are not guaranteed to come out in order; sort them.
  std::vector<int> idx(vals.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return vals[x] < vals[y]; });
  s.energies.resize(want);
  s.vectors.resize(n, want);
  for (int i = 0; i < want; ++i) {
    s.energies(i) = vals[idx[i]];
    s.vectors.col(i) = lock[idx[i]];
  }
  s.h_norm = std::max(std::abs(ritz_min), std::abs(ritz_max));
  detail::finish(s, opt);
  return s;
}

inline SpectralData spectrum(const OperatorSum& H, int k, const SpectrumOptions& opt = {}) {
  return spectrum(H.to_sparse(), k, opt);
}

}  // namespace locbounds::ed
