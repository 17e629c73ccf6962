#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <random>

#include "locbounds/bound_kernels.hpp"
#include "locbounds/ed/instances.hpp"
#include "locbounds/ed/lattice.hpp"
#include "locbounds/ed/response.hpp"
#include "locbounds/ed/spectrum.hpp"
#include "locbounds/fit.hpp"
#include "locbounds/hk_constants.hpp"
#include "unit/gen.hpp"

using namespace locbounds;
using namespace locbounds::ed;

namespace {

Instance tfim(std::uint64_t seed, int n, double alpha = 3.0, double v = 0.05) {
  std::mt19937_64 rng(seed);
  return random_tfim_instance(rng, n, alpha, v);
}

}  // namespace

TEST(Operators, SiteOrderingAndPauliAlgebra) {
  OperatorSum z0(2);
  z0.add_single(0, 'Z');
  DenseMatrix m = z0.to_dense();
  EXPECT_EQ(m(0, 0), cplx(1));
  EXPECT_EQ(m(1, 1), cplx(-1));
  EXPECT_EQ(m(2, 2), cplx(1));
  EXPECT_EQ(m(3, 3), cplx(-1));
  DenseMatrix xy = pauli('X') * pauli('Y');
  EXPECT_NEAR((xy - cplx(0, 1) * pauli('Z')).norm(), 0.0, 1e-15);
  EXPECT_THROW(pauli('Q'), DomainError);
  EXPECT_THROW(OperatorSum(2).add_single(2, 'X'), DomainError);
  EXPECT_THROW(OperatorSum(2).add_pair(1, 'X', 1, 'Z'), DomainError);
}

TEST(Operators, SupportNormIsTheExactNorm) {
  OperatorSum op(6);
  op.add_pair(1, 'X', 4, 'X', 0.5).add_pair(1, 'Y', 4, 'Y', 0.5);
  EXPECT_NEAR(support_norm(op), 1.0, 1e-12);
  EXPECT_NEAR(support_norm(op), hermitian_norm(op.to_dense()), 1e-12);
  EXPECT_EQ(op.norm_upper_bound(), 1.0);
  EXPECT_EQ(op.support(), (std::set<int>{1, 4}));
}

TEST(Spectrum, TwoSpinHeisenberg) {
  OperatorSum h(2);
  h.add_pair(0, 'X', 1, 'X').add_pair(0, 'Y', 1, 'Y').add_pair(0, 'Z', 1, 'Z');
  auto s = spectrum(h, 4);
  EXPECT_NEAR(s.energies(0), -3.0, 1e-13);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(s.energies(i), 1.0, 1e-13);
  EXPECT_EQ(s.d, 1);
  EXPECT_NEAR(s.gap, 4.0, 1e-13);
}

// Coefficients of the characteristic polynomial from traces of powers
// (Newton's identities) against elementary symmetric functions of the
// computed eigenvalues.
TEST(Spectrum, CharacteristicPolynomialOfRandomTwoSiteOperator) {
  gen::Rng g(51);
  const char P[] = {'I', 'X', 'Y', 'Z'};
  for (int c = 0; c < 20; ++c) {
    OperatorSum h(2);
    for (char a : P)
      for (char b : P) {
        double w = g.uniform(-1, 1);
        if (a == 'I' && b == 'I') h.add_identity(w);
        else if (a == 'I') h.add_single(1, b, w);
        else if (b == 'I') h.add_single(0, a, w);
        else h.add_pair(0, a, 1, b, w);
      }
    DenseMatrix H = h.to_dense();
    auto s = spectrum(h, 4);
    double p[5];
    DenseMatrix M = DenseMatrix::Identity(4, 4);
    for (int k = 1; k <= 4; ++k) {
      M = M * H;
      p[k] = M.trace().real();
    }
    double e1 = p[1], e2 = (e1 * p[1] - p[2]) / 2, e3 = (e2 * p[1] - e1 * p[2] + p[3]) / 3;
    double e4 = H.determinant().real();
    const auto& E = s.energies;
    double f1 = E.sum(), f2 = 0, f3 = 0, f4 = E.prod();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        f2 += E(i) * E(j);
        for (int k = j + 1; k < 4; ++k) f3 += E(i) * E(j) * E(k);
      }
    EXPECT_NEAR(f1, e1, 1e-12);
    EXPECT_NEAR(f2, e2, 1e-11);
    EXPECT_NEAR(f3, e3, 1e-11);
    EXPECT_NEAR(f4, e4, 1e-11);
  }
}

TEST(Spectrum, LanczosAgreesWithDense) {
  auto in = tfim(7, 8);
  SpectrumOptions sparse;
  sparse.dense_cap = 16;
  auto a = spectrum(in.H, 3);
  auto b = spectrum(in.H, 3, sparse);
  EXPECT_FALSE(b.full);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a.energies(i), b.energies(i), 1e-10);
  EXPECT_NEAR(std::abs(a.vectors.col(0).dot(b.vectors.col(0))), 1.0, 1e-10);
}

TEST(Spectrum, RejectsNonHermitian) {
  OperatorSum h(1);
  h.add_single(0, 'X', cplx(0, 1));
  EXPECT_THROW(spectrum(h, 1), DomainError);
}

TEST(Spectrum, DetectsExactDegeneracy) {
  auto in = degenerate_xxz_instance();
  auto s = spectrum(in.H, 4);
  EXPECT_EQ(s.d, 2);
  EXPECT_FALSE(s.ambiguous);
}

TEST(Response, TwoLevelOmegaAtZero) {
  for (double delta : {0.5, 1.0, 3.0}) {
    auto in = two_level_instance(delta);
    auto s = spectrum(in.H, 2);
    cplx om = omega_spectral(s, in.S.to_sparse(), in.V.to_sparse(), 0.0);
    EXPECT_NEAR(om.real(), 0.0, 1e-14);
    EXPECT_NEAR(om.imag(), -2.0 / delta, 1e-13);
  }
}

TEST(Response, OmegaDomain) {
  auto in = tfim(3, 6);
  auto s = spectrum(in.H, 1);
  SpectralResponse r(s, in.S.to_sparse(), in.V.to_sparse());
  EXPECT_THROW(r.omega(cplx(s.gap, 0.0)), DomainError);
  EXPECT_THROW(r.omega(cplx(-2.0 * s.gap, 0.0)), DomainError);
  EXPECT_NO_THROW(r.omega(cplx(0.5 * s.gap, 0.0)));
}

TEST(Response, SpectralEqualsTimeIntegralOnEightSites) {
  auto in = tfim(5, 8);
  auto s = spectrum(in.H, 1);
  const SparseMatrix S = in.S.to_sparse(), V = in.V.to_sparse();
  for (cplx w : {cplx(0, 0.3 * s.gap), cplx(0.2 * s.gap, -0.4 * s.gap)}) {
    auto ti = omega_time_integral(s, S, V, w);
    EXPECT_NEAR(std::abs(ti.value - omega_spectral(s, S, V, w)), 0.0, 1e-6) << w;
    EXPECT_LT(ti.tail_bound, 1e-9);
  }
  EXPECT_THROW(omega_time_integral(s, S, V, cplx(0.1, 0.0)), DomainError);
}

TEST(Response, CommutingBlocksGiveZero) {
  OperatorSum h(2), S(2), V(2);
  h.add_single(0, 'Z', -1.0).add_single(1, 'Z', -2.0);
  S.add_single(0, 'X');
  V.add_single(1, 'X');
  auto s = spectrum(h, 1);
  const SparseMatrix Sm = S.to_sparse(), Vm = V.to_sparse();
  EXPECT_EQ(std::abs(omega_spectral(s, Sm, Vm, cplx(0, 0.7))), 0.0);
  EXPECT_NEAR(std::abs(omega_time_integral(s, Sm, Vm, cplx(0, 0.7)).value), 0.0, 1e-12);
}

TEST(Response, TimeIntegralBelowCertifiedEnvelope) {
  auto in = tfim(9, 7);
  auto s = spectrum(in.H, 1);
  double h0 = certified_h0(in.lattice, in.coupling.alpha, {&in.H, &in.V});
  auto hk = derive_hk_constants(h0, in.coupling.alpha, 1, in.norm_s, in.norm_v, double(in.X.size() * in.Y.size()));
  OmegaBarEnvelope env(hk.to_kernel(), in.lattice.distance(in.X, in.Y));
  SpectralResponse r(s, in.S.to_sparse(), in.V.to_sparse());
  for (double y : {0.01, 0.1, 1.0, 10.0}) EXPECT_LE(std::abs(r.omega(cplx(0, y))), env(y));
}

TEST(Response, ConjugationAndRealityAtZero) {
  gen::Rng g(52);
  auto in = tfim(11, 6);
  auto s = spectrum(in.H, 1);
  SpectralResponse r(s, in.S.to_sparse(), in.V.to_sparse());
  EXPECT_NEAR((cplx(0, 1) * r.omega(0.0)).imag(), 0.0, 1e-14);
  for (int c = 0; c < 50; ++c) {
    cplx w(g.uniform(-3, 3), g.uniform(0.01, 3) * (c % 2 ? 1 : -1));
    EXPECT_NEAR(std::abs(std::conj(r.omega(w)) + r.omega(-std::conj(w))), 0.0, 1e-12);
  }
}

TEST(Response, AxisIntegralEqualsCorrelation) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto in = tfim(seed, 7);
    auto s = spectrum(in.H, 1);
    SpectralResponse r(s, in.S.to_sparse(), in.V.to_sparse());
    auto ax = axis_integral_identity(r);
    EXPECT_LT(ax.residual, 1e-8);
    // nondegenerate: projected form equals the connected correlator
    EXPECT_NEAR(std::abs(ax.correlation - connected_correlation(s, in.S.to_sparse(), in.V.to_sparse())), 0.0, 1e-14);
  }
  auto in = degenerate_xxz_instance();
  auto s = spectrum(in.H, 1);
  SpectralResponse r(s, in.S.to_sparse(), in.V.to_sparse());
  EXPECT_EQ(r.d(), 2);
  EXPECT_LT(axis_integral_identity(r).residual, 1e-8);
}

TEST(Response, DerivativeIdentity) {
  auto in = tfim(4, 6);
  auto dc = dlambda_identity_check(in.H, in.V, in.S, 0.0);
  EXPECT_TRUE(dc.passed) << dc.residual << " ratio " << dc.order_ratio;
  EXPECT_GT(dc.order_ratio, 3.0);
  // the opposite sign is far off
  EXPECT_GT(dc.flipped_sign_residual, 1e3 * dc.residual);
  auto mid = dlambda_identity_check(in.H, in.V, in.S, 0.5);
  EXPECT_TRUE(mid.passed);
  OperatorSum zero(6);
  auto z = dlambda_identity_check(in.H, zero, in.S, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
  EXPECT_TRUE(z.passed);
}

TEST(Response, DerivativeIdentityUnderDegeneracy) {
  auto in = degenerate_xxz_instance();
  auto dc = dlambda_identity_check(in.H, in.V, in.S, 0.0);
  EXPECT_TRUE(dc.passed) << dc.residual;
}

TEST(Response, DeltaExpectationAgainstLambdaIntegration) {
  auto in = tfim(21, 8);
  auto de = delta_expectation(in.H, in.V, in.S);
  const SparseMatrix H = in.H.to_sparse(), V = in.V.to_sparse(), S = in.S.to_sparse();
  auto slope = [&](double lam) {
    auto s = spectrum(SparseMatrix(H + lam * V), 1);
    return (cplx(0, -1) * SpectralResponse(s, S, V).omega(0.0)).real();
  };
  double oracle = boost::math::quadrature::gauss<double, 10>::integrate(slope, 0.0, 1.0);
  EXPECT_NEAR(de.value, oracle, 1e-12);
  EXPECT_EQ(delta_expectation(in.H, OperatorSum(8), in.S).value, 0.0);
  OperatorSum id(8);
  id.add_identity(1.0);
  EXPECT_NEAR(delta_expectation(in.H, in.V, id).value, 0.0, 1e-14);
}

TEST(Response, DegenerateBasisQ) {
  auto in = tfim(8, 6);
  auto s = spectrum(in.H, 1);
  auto q = degenerate_block_basis(s, in.V.to_sparse());
  EXPECT_EQ(q.Q.rows(), 1);
  EXPECT_EQ(q.Q(0, 0), cplx(0));

  // two-fold cluster split by a tiny field: distinct exact groups, nonzero Q
  auto xxz = degenerate_xxz_instance();
  OperatorSum H = xxz.H;
  H.add_single(2, 'Z', 1e-10);
  auto s2 = spectrum(H, 3);
  ASSERT_EQ(s2.d, 2);
  auto q2 = degenerate_block_basis(s2, xxz.V.to_sparse());
  EXPECT_NE(q2.group[0], q2.group[1]);
  double scale = std::max(1.0, q2.Q.cwiseAbs().maxCoeff());
  EXPECT_LE(q2.anti_hermitian_residual, 1e-12 * scale);
  for (int a = 0; a < 2; ++a) EXPECT_EQ(q2.Q(a, a), cplx(0));

  // exact pair: V is diagonalized inside the block
  auto s3 = spectrum(xxz.H, 3);
  auto q3 = degenerate_block_basis(s3, xxz.V.to_sparse());
  EXPECT_EQ(q3.group[0], q3.group[1]);
  EXPECT_LT(q3.v_offdiag_residual, 1e-12);
  EXPECT_EQ(q3.anti_hermitian_residual, 0.0);
}

TEST(Response, ConnectedCorrelationTrivialCases) {
  auto in = tfim(12, 6);
  auto s = spectrum(in.H, 1);
  OperatorSum id(6);
  id.add_identity(1.0);
  EXPECT_NEAR(std::abs(connected_correlation(s, id.to_sparse(), in.V.to_sparse())), 0.0, 1e-14);
  OperatorSum prod(4), A(4), B(4);
  for (int i = 0; i < 4; ++i) prod.add_single(i, 'Z', -1.0 - 0.1 * i);
  A.add_single(0, 'X');
  B.add_single(3, 'X');
  auto sp = spectrum(prod, 1);
  EXPECT_NEAR(std::abs(connected_correlation(sp, A.to_sparse(), B.to_sparse())), 0.0, 1e-15);
}

TEST(Path, WeylGuardAndGapClosure) {
  auto in = tfim(13, 7);
  auto rep = gap_along_path(in.H, in.V, {0, 0.25, 0.5, 0.75, 1});
  EXPECT_TRUE(rep.weyl_ok);
  EXPECT_TRUE(rep.gapped);
  for (const auto& p : rep.points) EXPECT_GE(p.gap, p.weyl_bound - 1e-10);
  std::mt19937_64 rng(4);
  auto cr = crossing_instance(rng, 6, 3.0);
  auto rc = gap_along_path(cr.H, cr.V, {0, 0.25, 0.5, 0.75, 1});
  EXPECT_FALSE(rc.gapped && rc.delta_min > 1e-3 * rc.points.front().gap);
  EXPECT_THROW(gap_along_path(in.H, in.V, {}), DomainError);
  EXPECT_THROW(gap_along_path(in.H, in.V, {1.5}), DomainError);
}

TEST(Lattice, CouplingAuditAndCuts) {
  auto in = tfim(14, 8);
  for (const auto& a : coupling_audit(in.lattice, in.coupling)) EXPECT_TRUE(a.ok);
  EXPECT_NEAR(certified_h0(in.lattice, 3.0, {&in.H}), 1.0, 0.5 + 1e-12);

  LatticeSpec chain{1, {14}};
  CouplingModel c;
  c.alpha = 3.0;
  std::set<int> block;
  for (int i = 0; i < 10; ++i) block.insert(i);
  auto cut = boundary_perturbation(chain, c, block);
  EXPECT_EQ(cut.term_count, 40);
  for (const auto& t : cut.terms) EXPECT_TRUE(t.ok);

  // nearest neighbour only: one term per cut edge
  LatticeSpec six{1, {6}};
  CouplingModel nn;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) nn.pair_scale.push_back(j == i + 1 ? 1.0 : 0.0);
  EXPECT_EQ(boundary_perturbation(six, nn, {0, 1, 2}).term_count, 1);
  EXPECT_EQ(boundary_perturbation(six, nn, {2, 3}).term_count, 2);

  LatticeSpec big{1, {15}};
  EXPECT_THROW(big.validate(), DomainError);
  LatticeSpec sq{2, {3, 3}};
  EXPECT_EQ(sq.distance(0, 8), 4.0);
  sq.metric = LatticeMetric::Euclidean;
  EXPECT_NEAR(sq.distance(0, 8), std::sqrt(8.0), 1e-15);
}

TEST(Lattice, SplitIdentity) {
  std::mt19937_64 rng(77);
  auto sp = split_instance(rng, 6, 2, 3.0);
  EXPECT_EQ(sp.cut.term_count, 12);
  auto full = spectrum(sp.H_full - sp.cut.V, 3);
  auto small = spectrum(sp.H_small, 3);
  EXPECT_NEAR(ground_average(full, sp.S_full.to_sparse()).real(), ground_average(small, sp.S_small.to_sparse()).real(),
              1e-10);
}

TEST(Fit, SyntheticDecays) {
  std::vector<std::pair<double, double>> pw, ex;
  for (double r = 1; r <= 64; r *= 2) pw.push_back({r, 2.5 * std::pow(r, -3.0)});
  for (double r = 1; r <= 20; r += 1) ex.push_back({r, 0.3 * std::exp(-0.5 * r)});
  auto a = fit_decay(pw, DecayModel::Power);
  EXPECT_NEAR(a.exponent, 3.0, 1e-12);
  EXPECT_NEAR(a.intercept, std::log(2.5), 1e-12);
  EXPECT_LT(a.residual, 1e-12);
  EXPECT_NEAR(fit_decay(ex, DecayModel::Exponential).exponent, 0.5, 1e-12);
  EXPECT_THROW(fit_decay({{1, 1}}, DecayModel::Power), DomainError);
  EXPECT_THROW(fit_decay({{1, 1}, {2, -1}}, DecayModel::Power), DomainError);
}
