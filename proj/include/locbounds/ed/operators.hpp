#pragma once

// Operators on a tensor product of identical local spaces, stored as sums of
// product terms and materialized on demand.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <vector>

#include "locbounds/errors.hpp"

namespace locbounds::ed {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct LocalOp {
  int site;
  DenseMatrix m;
};

struct ProductTerm {
  cplx coeff{1.0, 0.0};
  std::vector<LocalOp> factors;  // at most one factor per site
};

inline DenseMatrix pauli(char p) {
  DenseMatrix m(2, 2);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw DomainError(std::string("unknown Pauli label: ") + p);
  }
  return m;
}

/// Spectral norm of a small dense matrix.
inline double spectral_norm(const DenseMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

class OperatorSum {
 public:
  OperatorSum(int n_sites, int local_dim = 2) : n_(n_sites), q_(local_dim) {
    require(n_sites >= 1, "OperatorSum: need at least one site");
    require(local_dim >= 2, "OperatorSum: local dimension must be >= 2");
    require(std::pow(double(local_dim), n_sites) < 1e9, "OperatorSum: Hilbert space too large");
  }

  int n_sites() const { return n_; }
  int local_dim() const { return q_; }
  std::int64_t dim() const {
    std::int64_t d = 1;
    for (int i = 0; i < n_; ++i) d *= q_;
    return d;
  }
  const std::vector<ProductTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  OperatorSum& add(ProductTerm t) {
    std::set<int> seen;
    for (auto& f : t.factors) {
      require(f.site >= 0 && f.site < n_, "OperatorSum: site index out of range");
      require(f.m.rows() == q_ && f.m.cols() == q_, "OperatorSum: local operator has the wrong dimension");
      require(seen.insert(f.site).second, "OperatorSum: repeated site within one product term");
    }
    if (t.coeff != cplx(0.0)) terms_.push_back(std::move(t));
    return *this;
  }

  /// coeff * P_i for a Pauli label.
  OperatorSum& add_single(int site, char p, cplx coeff = 1.0) { return add({coeff, {{site, pauli(p)}}}); }
  OperatorSum& add_pair(int i, char p, int j, char q, cplx coeff = 1.0) {
    return add({coeff, {{i, pauli(p)}, {j, pauli(q)}}});
  }
  OperatorSum& add_identity(cplx coeff) { return add({coeff, {}}); }

  OperatorSum& operator+=(const OperatorSum& o) {
    require(o.n_ == n_ && o.q_ == q_, "OperatorSum: incompatible operands");
    for (const auto& t : o.terms_) terms_.push_back(t);
    return *this;
  }
  OperatorSum scaled(cplx s) const {
    OperatorSum r = *this;
    for (auto& t : r.terms_) t.coeff *= s;
    return r;
  }
  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a += b.scaled(-1.0); }

  std::set<int> support() const {
    std::set<int> s;
    for (const auto& t : terms_)
      for (const auto& f : t.factors) s.insert(f.site);
    return s;
  }

  /// Triangle-inequality bound sum |c| prod ||f||.
  double norm_upper_bound() const {
    double s = 0.0;
    for (const auto& t : terms_) {
      double p = std::abs(t.coeff);
      for (const auto& f : t.factors) p *= spectral_norm(f.m);
      s += p;
    }
    return s;
  }

  /// Site i is digit i of the basis index in base q (site 0 least significant).
  SparseMatrix to_sparse() const {
    const std::int64_t N = dim();
    std::vector<std::int64_t> stride(n_);
    for (int i = 0; i < n_; ++i) stride[i] = i == 0 ? 1 : stride[i - 1] * q_;
    std::vector<Eigen::Triplet<cplx>> trip;
    for (const auto& t : terms_) {
      for (std::int64_t col = 0; col < N; ++col) emit(t, col, stride, trip);
    }
    SparseMatrix m(N, N);
    m.setFromTriplets(trip.begin(), trip.end());
    m.prune(cplx(0.0));
    m.makeCompressed();
    return m;
  }

  DenseMatrix to_dense() const { return DenseMatrix(to_sparse()); }

 private:
  void emit(const ProductTerm& t, std::int64_t col, const std::vector<std::int64_t>& stride,
            std::vector<Eigen::Triplet<cplx>>& trip) const {
    // enumerate the nonzero rows of each factor applied to column col
    struct Partial {
      std::int64_t row;
      cplx amp;
    };
    std::vector<Partial> cur{{col, t.coeff}}, next;
    for (const auto& f : t.factors) {
      next.clear();
      const int s = f.site;
      for (const auto& p : cur) {
        const int in = static_cast<int>((col / stride[s]) % q_);
        const std::int64_t base = p.row - in * stride[s];
        for (int out = 0; out < q_; ++out) {
          cplx a = f.m(out, in);
          if (a != cplx(0.0)) next.push_back({base + out * stride[s], p.amp * a});
        }
      }
      std::swap(cur, next);
    }
    for (const auto& p : cur) trip.emplace_back(p.row, col, p.amp);
  }

  int n_;
  int q_;
  std::vector<ProductTerm> terms_;
};

inline bool is_hermitian(const SparseMatrix& m, double tol = 1e-12) {
  SparseMatrix d = m - SparseMatrix(m.adjoint());
  double scale = std::max(1.0, m.norm());
  return d.norm() <= tol * scale;
}

/// Exact spectral norm of a Hermitian operator on a small space.
inline double hermitian_norm(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, Eigen::EigenvaluesOnly);
  const auto& e = es.eigenvalues();
  return std::max(std::abs(e(0)), std::abs(e(e.size() - 1)));
}

/// Norm of a Hermitian operator computed on its own support (the identity
/// elsewhere does not change it). Falls back to the triangle bound when the
/// support is too large for a dense solve.
inline double support_norm(const OperatorSum& op, int max_support = 10) {
  auto sup = op.support();
  if (sup.empty()) {
    cplx c = 0.0;
    for (const auto& t : op.terms()) c += t.coeff;
    return std::abs(c);
  }
  if (static_cast<int>(sup.size()) > max_support) return op.norm_upper_bound();
  std::vector<int> sites(sup.begin(), sup.end());
  OperatorSum local(static_cast<int>(sites.size()), op.local_dim());
  for (auto t : op.terms()) {
    for (auto& f : t.factors) f.site = static_cast<int>(std::lower_bound(sites.begin(), sites.end(), f.site) - sites.begin());
    local.add(std::move(t));
  }
  return hermitian_norm(local.to_dense());
}

}  // namespace locbounds::ed
