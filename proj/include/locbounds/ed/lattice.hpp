#pragma once

// Finite lattices and power-law (or exponential) spin-1/2 Hamiltonians.

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "locbounds/ed/operators.hpp"
#include "locbounds/errors.hpp"
#include "locbounds/hk_constants.hpp"

namespace locbounds::ed {

struct LatticeSpec {
  int D = 1;
  std::vector<int> lengths{8};
  LatticeMetric metric = LatticeMetric::Graph;
  int max_sites = 14;

  int n_sites() const {
    int n = 1;
    for (int l : lengths) n *= l;
    return n;
  }

  void validate() const {
    require(D == 1 || D == 2, "LatticeSpec: D must be 1 or 2");
    require(static_cast<int>(lengths.size()) == D, "LatticeSpec: need one length per axis");
    for (int l : lengths) require(l >= 1, "LatticeSpec: lengths must be positive");
    require(n_sites() <= max_sites, "LatticeSpec: site count exceeds the cap of " + std::to_string(max_sites));
  }

  /// Row-major coordinates, axis 0 fastest.
  std::vector<int> coords(int i) const {
    std::vector<int> c(D);
    for (int a = 0; a < D; ++a) {
      c[a] = i % lengths[a];
      i /= lengths[a];
    }
    return c;
  }

  double distance(int i, int j) const {
    auto a = coords(i), b = coords(j);
    if (metric == LatticeMetric::Graph) {
      double d = 0;
      for (int k = 0; k < D; ++k) d += std::abs(a[k] - b[k]);
      return d;
    }
    double d2 = 0;
    for (int k = 0; k < D; ++k) d2 += double(a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(d2);
  }

  /// min distance between two site sets
  double distance(const std::set<int>& X, const std::set<int>& Y) const {
    double d = std::numeric_limits<double>::infinity();
    for (int i : X)
      for (int j : Y) d = std::min(d, distance(i, j));
    return d;
  }
};

enum class PairPattern { ZZ, XY, XXZ };

inline PairPattern pair_pattern_from_string(const std::string& s) {
  if (s == "ZZ") return PairPattern::ZZ;
  if (s == "XY") return PairPattern::XY;
  if (s == "XXZ") return PairPattern::XXZ;
  throw DomainError("unknown pair pattern: " + s);
}

/// Pair term J_ij * O_ij with ||O_ij|| = 1, so ||h_ij|| = |J_ij|.
///   ZZ : Z Z
///   XY : (X X + Y Y)/2
///   XXZ: (X X + Y Y + anisotropy Z Z)/(2 + |anisotropy|)
/// Fields: transverse X and longitudinal Z, per site (uniform + disorder).
struct CouplingModel {
  double alpha = 3.0;
  double h0 = 1.0;
  PairPattern pattern = PairPattern::ZZ;
  double anisotropy = 1.0;
  double sign = -1.0;  // J_ij = sign * h0 * scale_ij * d^{-alpha}
  bool exponential = false;
  double mu = 1.0;     // exponential variant: d^{-alpha} -> e^{-mu d}
  std::vector<double> pair_scale;  // optional factors in [0,1], indexed by pair order (i<j)
  std::vector<double> transverse;  // per-site X field (empty = none)
  std::vector<double> longitudinal;  // per-site Z field

  double decay(double d) const { return exponential ? std::exp(-mu * d) : std::pow(d, -alpha); }
};

struct PairAudit {
  int i, j;
  double distance;
  double norm;  // ||sum of terms containing i and j||
  double cap;   // h0 d^{-alpha} (or h0 e^{-mu d})
  bool ok;
};

namespace detail {

inline void add_pair_pattern(OperatorSum& op, const CouplingModel& c, int i, int j, double J) {
  switch (c.pattern) {
    case PairPattern::ZZ: op.add_pair(i, 'Z', j, 'Z', J); break;
    case PairPattern::XY:
      op.add_pair(i, 'X', j, 'X', J / 2);
      op.add_pair(i, 'Y', j, 'Y', J / 2);
      break;
    case PairPattern::XXZ: {
      double s = J / (2.0 + std::abs(c.anisotropy));
      op.add_pair(i, 'X', j, 'X', s);
      op.add_pair(i, 'Y', j, 'Y', s);
      op.add_pair(i, 'Z', j, 'Z', s * c.anisotropy);
      break;
    }
  }
}

inline double pair_coupling(const LatticeSpec& lat, const CouplingModel& c, int i, int j, std::size_t k) {
  double scale = k < c.pair_scale.size() ? c.pair_scale[k] : 1.0;
  return c.sign * c.h0 * scale * c.decay(lat.distance(i, j));
}

inline void validate(const LatticeSpec& lat, const CouplingModel& c) {
  lat.validate();
  require(c.h0 > 0, "CouplingModel: h0 must be positive");
  require(c.exponential ? c.mu > 0 : c.alpha > 0, "CouplingModel: decay parameter must be positive");
  const int n = lat.n_sites();
  require(c.transverse.empty() || static_cast<int>(c.transverse.size()) == n, "CouplingModel: transverse field size");
  require(c.longitudinal.empty() || static_cast<int>(c.longitudinal.size()) == n,
          "CouplingModel: longitudinal field size");
  for (double s : c.pair_scale) require(s >= 0 && s <= 1, "CouplingModel: pair scales must lie in [0,1]");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) require(lat.distance(i, j) >= 1.0, "LatticeSpec: distinct sites closer than 1");
}

}  // namespace detail

/// Pair terms only (the interaction part).
inline OperatorSum build_interactions(const LatticeSpec& lat, const CouplingModel& c) {
  detail::validate(lat, c);
  const int n = lat.n_sites();
  OperatorSum op(n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) detail::add_pair_pattern(op, c, i, j, detail::pair_coupling(lat, c, i, j, k));
  return op;
}

inline OperatorSum build_hamiltonian(const LatticeSpec& lat, const CouplingModel& c) {
  OperatorSum op = build_interactions(lat, c);
  for (int i = 0; i < lat.n_sites(); ++i) {
    if (!c.transverse.empty() && c.transverse[i] != 0) op.add_single(i, 'X', c.transverse[i]);
    if (!c.longitudinal.empty() && c.longitudinal[i] != 0) op.add_single(i, 'Z', c.longitudinal[i]);
  }
  return op;
}

/// Checks sum_{X containing i,j} ||h_X|| <= h0 d_ij^{-alpha} for every pair.
/// Only pair terms contain two distinct sites, so the sum is the norm of the
/// pair term itself.
inline std::vector<PairAudit> coupling_audit(const LatticeSpec& lat, const CouplingModel& c) {
  detail::validate(lat, c);
  std::vector<PairAudit> out;
  const int n = lat.n_sites();
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      OperatorSum t(n);
      detail::add_pair_pattern(t, c, i, j, detail::pair_coupling(lat, c, i, j, k));
      double d = lat.distance(i, j);
      double nrm = support_norm(t);
      double cap = c.h0 * c.decay(d);
      out.push_back({i, j, d, nrm, cap, nrm <= cap * (1.0 + 1e-12)});
    }
  return out;
}

struct BoundaryCut {
  OperatorSum V;          // sum over i in block, j outside
  std::vector<PairAudit> terms;
  int term_count = 0;
};

/// Interaction between a block of sites and the rest of the lattice. Nearest
/// neighbour models are obtained by a pair_scale that zeroes longer bonds.
inline BoundaryCut boundary_perturbation(const LatticeSpec& lat, const CouplingModel& c, const std::set<int>& block) {
  detail::validate(lat, c);
  const int n = lat.n_sites();
  for (int b : block) require(b >= 0 && b < n, "boundary_perturbation: block site out of range");
  BoundaryCut cut{OperatorSum(n), {}, 0};
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      if (block.count(i) == block.count(j)) continue;
      double J = detail::pair_coupling(lat, c, i, j, k);
      if (J == 0.0) continue;
      OperatorSum t(n);
      detail::add_pair_pattern(t, c, i, j, J);
      double d = lat.distance(i, j), nrm = support_norm(t), cap = c.h0 * c.decay(d);
      cut.terms.push_back({i, j, d, nrm, cap, nrm <= cap * (1.0 + 1e-12)});
      cut.V += t;
      ++cut.term_count;
    }
  return cut;
}

/// Smallest h0 with sum_{X containing i,j} ||h_X|| <= h0 d_ij^{-alpha} for the
/// sum of the given operators (terms grouped by support, each group normed
/// exactly). Single-site terms do not enter.
inline double certified_h0(const LatticeSpec& lat, double alpha, const std::vector<const OperatorSum*>& ops) {
  std::map<std::set<int>, double> group_norm;
  for (const OperatorSum* op : ops) {
    std::map<std::set<int>, OperatorSum> groups;
    for (const auto& t : op->terms()) {
      std::set<int> sup;
      for (const auto& f : t.factors) sup.insert(f.site);
      if (sup.size() < 2) continue;
      groups.try_emplace(sup, op->n_sites(), op->local_dim()).first->second.add(t);
    }
    for (const auto& [sup, g] : groups) group_norm[sup] += support_norm(g);
  }
  double h0 = 0.0;
  const int n = lat.n_sites();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (const auto& [sup, nrm] : group_norm)
        if (sup.count(i) && sup.count(j)) s += nrm;
      h0 = std::max(h0, s * std::pow(lat.distance(i, j), alpha));
    }
  return h0;
}

}  // namespace locbounds::ed
