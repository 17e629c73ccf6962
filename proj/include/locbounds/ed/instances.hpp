#pragma once

// Randomized and hand-built test instances for the identity and inequality
// suites.

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "locbounds/ed/lattice.hpp"
#include "locbounds/ed/operators.hpp"

namespace locbounds::ed {

struct Instance {
  std::string name;
  LatticeSpec lattice;
  CouplingModel coupling;
  OperatorSum H;
  OperatorSum S;  // observable on X
  OperatorSum V;  // perturbation on Y
  std::set<int> X, Y;
  double norm_s = 1.0, norm_v = 1.0;
};

/// Uniform draw from [lo, hi] built from the raw 64-bit stream, so the
/// sequence does not depend on the standard library's distributions.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
}

/// Ferromagnetic power-law Ising chain in a strong disordered transverse
/// field (paramagnetic, unique gapped ground state). S sits on site 0, V on
/// the last one or two sites with a random direction in the X-Z plane.
inline Instance random_tfim_instance(std::mt19937_64& rng, int n, double alpha, double v_strength) {
  Instance in{"tfim", {1, {n}}, {}, OperatorSum(n), OperatorSum(n), OperatorSum(n), {}, {}};
  auto& c = in.coupling;
  c.alpha = alpha;
  c.h0 = 1.0;
  c.pattern = PairPattern::ZZ;
  c.sign = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c.pair_scale.push_back(uniform(rng, 0.5, 1.0));
  for (int i = 0; i < n; ++i) {
    c.transverse.push_back(-uniform(rng, 1.6, 2.6));
    c.longitudinal.push_back(uniform(rng, -0.2, 0.2));
  }
  in.H = build_hamiltonian(in.lattice, c);
  double th = uniform(rng, 0.0, std::numbers::pi / 2);
  in.S.add_single(0, 'Z', std::cos(th)).add_single(0, 'X', std::sin(th));
  in.X = {0};
  const bool two = rng() % 2 == 0;
  double ph = uniform(rng, 0.0, std::numbers::pi / 2);
  if (two) {
    in.V.add_single(n - 1, 'Z', v_strength * std::cos(ph));
    in.V.add_pair(n - 2, 'X', n - 1, 'Z', v_strength * std::sin(ph));
    in.Y = {n - 2, n - 1};
  } else {
    in.V.add_single(n - 1, 'Z', v_strength * std::cos(ph)).add_single(n - 1, 'X', v_strength * std::sin(ph));
    in.Y = {n - 1};
  }
  in.norm_s = support_norm(in.S);
  in.norm_v = support_norm(in.V);
  in.name = "tfim-N" + std::to_string(n);
  return in;
}

/// Odd-length XXZ chain without field: total S^z and spin flip give an exactly
/// two-fold degenerate ground space (S^z = +-1/2). A longitudinal V breaks the
/// symmetry.
inline Instance degenerate_xxz_instance(int n = 7, double alpha = 3.0, double anisotropy = 0.5,
                                        double v_strength = 0.05) {
  Instance in{"xxz-degenerate", {1, {n}}, {}, OperatorSum(n), OperatorSum(n), OperatorSum(n), {}, {}};
  auto& c = in.coupling;
  c.alpha = alpha;
  c.h0 = 1.0;
  c.pattern = PairPattern::XXZ;
  c.anisotropy = anisotropy;
  c.sign = 1.0;
  in.H = build_hamiltonian(in.lattice, c);
  in.S.add_single(0, 'Z');
  in.X = {0};
  in.V.add_single(n - 1, 'Z', v_strength).add_single(n - 1, 'X', 0.5 * v_strength);
  in.Y = {n - 1};
  in.norm_s = support_norm(in.S);
  in.norm_v = support_norm(in.V);
  return in;
}

/// Power-law Ising chain on the first n-1 sites plus a decoupled last spin in
/// a field -(delta/2) Z; V = delta Z on that spin closes the gap exactly at
/// lambda = 1/2.
inline Instance crossing_instance(std::mt19937_64& rng, int n, double alpha, double delta = 0.5) {
  Instance in = random_tfim_instance(rng, n, alpha, 0.0);
  in.name = "crossing-N" + std::to_string(n);
  auto& c = in.coupling;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k)
      if (j == n - 1) c.pair_scale[k] = 0.0;
  c.transverse[n - 1] = 0.0;
  c.longitudinal[n - 1] = -delta / 2;
  in.H = build_hamiltonian(in.lattice, c);
  in.V = OperatorSum(n);
  in.V.add_single(n - 1, 'Z', delta);
  in.Y = {n - 1};
  in.norm_v = support_norm(in.V);
  return in;
}

/// Two levels split by Delta with S = V = sigma^x: Omega(0) = -2i/Delta.
inline Instance two_level_instance(double delta) {
  Instance in{"two-level", {1, {1}}, {}, OperatorSum(1), OperatorSum(1), OperatorSum(1), {0}, {0}};
  in.H.add_single(0, 'Z', -delta / 2);
  in.S.add_single(0, 'X');
  in.V.add_single(0, 'X');
  return in;
}

/// A block of `block` sites inside a chain of block + env sites with the same
/// power-law couplings; V is the cut interaction.
struct SplitInstance {
  LatticeSpec full, small;
  CouplingModel coupling_full, coupling_small;
  OperatorSum H_full;
  OperatorSum H_small;
  OperatorSum S_full, S_small;
  BoundaryCut cut;
};

inline SplitInstance split_instance(std::mt19937_64& rng, int block, int env, double alpha) {
  const int n = block + env;
  LatticeSpec full{1, {n}}, small{1, {block}};
  CouplingModel c;
  c.alpha = alpha;
  c.h0 = 1.0;
  c.sign = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c.pair_scale.push_back(uniform(rng, 0.5, 1.0));
  for (int i = 0; i < n; ++i) c.transverse.push_back(-uniform(rng, 1.6, 2.6));
  for (int i = 0; i < n; ++i) c.longitudinal.push_back(uniform(rng, -0.2, 0.2));
  CouplingModel cs = c;
  cs.pair_scale.clear();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (i < block && j < block) cs.pair_scale.push_back(c.pair_scale[std::size_t(i) * (2 * n - i - 1) / 2 + (j - i - 1)]);
  cs.transverse.resize(block);
  cs.longitudinal.resize(block);
  std::set<int> blk;
  for (int i = 0; i < block; ++i) blk.insert(i);
  SplitInstance s{full, small, c, cs, build_hamiltonian(full, c), build_hamiltonian(small, cs),
                  OperatorSum(n), OperatorSum(block), boundary_perturbation(full, c, blk)};
  s.S_full.add_single(block - 1, 'Z');
  s.S_small.add_single(block - 1, 'Z');
  return s;
}

}  // namespace locbounds::ed
