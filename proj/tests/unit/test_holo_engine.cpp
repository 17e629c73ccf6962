#include <gtest/gtest.h>

#include <numbers>

#include "locbounds/holo_engine.hpp"
#include "unit/gen.hpp"

using namespace locbounds;

TEST(HoloEngine, GapModelRejectsBadInput) {
  EXPECT_THROW(GapModel(0.0, 1.0), DomainError);
  EXPECT_THROW(GapModel(1.0, -1.0), DomainError);
  GapModel g(1.0, 2.0);
  EXPECT_TRUE(g.excluded({1.5, 0.0}));
  EXPECT_FALSE(g.excluded({0.5, 0.0}));
  EXPECT_FALSE(g.excluded({1.5, 0.1}));
}

TEST(HoloEngine, StripMapStaysOffTheCut) {
  gen::Rng g(21);
  for (int c = 0; c < gen::kCases; ++c) {
    GapModel gap(g.log_uniform(1e-2, 1e2), g.log_uniform(0.1, 10));
    StripMap f{gap};
    double rho = g.uniform(0.0, 0.999), th = g.uniform(0.0, 2 * std::numbers::pi);
    auto w = f(std::polar(rho, th));
    EXPECT_FALSE(gap.excluded(w, 1e-12 * gap.Delta)) << w;
    EXPECT_NEAR(std::abs(w.imag()), f.imag(rho, th), 1e-9 * (1 + std::abs(w.imag())));
    // strip of half-width v
    EXPECT_LT(std::abs(w.imag()), gap.v * (1 + 1e-12));
  }
  GapModel gap(1.0, 1.0);
  EXPECT_EQ(conformal_f({0.0, 0.0}, gap), std::complex<double>(0.0, 0.0));
  // the real diameter maps onto (-Delta, Delta)
  EXPECT_NEAR(conformal_f({0.999999, 0.0}, gap).real(), 1.0, 1e-3);
  EXPECT_THROW(conformal_f({1.0, 0.0}, gap), DomainError);
}

TEST(HoloEngine, CircleAverageOfConstantEnvelope) {
  GapModel gap(1.0, 1.0);
  ConstantEnvelope e{3.0};
  for (double rho : {0.2, 0.7}) {
    EXPECT_NEAR(disk_average_log_bound(e, rho, gap), std::log(3.0), 1e-9);
    EXPECT_NEAR(conformal_average_log_bound(e, rho, gap), std::log(3.0), 1e-9);
  }
}

// (1/2pi) int ln(c/(rho |sin theta|)) = ln c - ln rho + ln 2
TEST(HoloEngine, CircleAverageOfInverseYOnTheDisk) {
  GapModel gap(2.0, 1.0);
  for (double c : {0.5, 4.0})
    for (double rho : {0.1, 1.0, 1.9})
      EXPECT_NEAR(disk_average_log_bound(InverseYEnvelope{c}, rho, gap), std::log(c) - std::log(rho) + std::numbers::ln2,
                  1e-9);
  EXPECT_THROW(disk_average_log_bound(InverseYEnvelope{1}, 2.0, gap), DomainError);
  EXPECT_THROW(conformal_average_log_bound(InverseYEnvelope{1}, 1.0, gap), DomainError);
}

TEST(HoloEngine, NonIntegrableEnvelopeIsReported) {
  struct Wild {
    double log_value(double y) const { return 1.0 / y; }
  };
  EXPECT_THROW(disk_average_log_bound(Wild{}, 0.5, GapModel(1.0, 1.0)), DivergenceError);
}

// Omega(w) = i/(w - eps) - i/(w + eps) is analytic off K_eps with |Omega(iy)| <= 2/|y|.
TEST(HoloEngine, CircleAverageBoundsAPolePair) {
  gen::Rng g(22);
  for (int c = 0; c < 50; ++c) {
    double eps = g.log_uniform(0.1, 10);
    GapModel gap(eps, g.log_uniform(0.1, 10));
    double lhs = std::log(2.0 / eps);
    InverseYEnvelope env{2.0};
    double rho = g.uniform(0.01, 0.999);
    EXPECT_LE(lhs, disk_average_log_bound(env, rho * eps, gap) + 1e-12);
    EXPECT_LE(lhs, conformal_average_log_bound(env, rho, gap) + 1e-12);
  }
}

TEST(HoloEngine, OptimizerNeverWorsensItsStart) {
  gen::Rng g(23);
  for (int c = 0; c < 12; ++c) {
    HastingsKoma k{1, 1, g.uniform(1.5, 5), 1, 1, false};
    OmegaBarEnvelope env(k, g.log_uniform(1, 1e5));
    GapModel gap(g.log_uniform(0.1, 10), 1.0);
    auto o = optimize_rho(env, gap);
    EXPECT_LE(o.log_bound, o.log_bound_init);
    EXPECT_GT(o.rho_star, 0.0);
    EXPECT_LT(o.rho_star, 1.0);
    auto d = optimize_rho_disk(env, gap);
    EXPECT_LE(d.log_bound, d.log_bound_init);
    EXPECT_LT(d.rho_star, gap.Delta);
  }
}

TEST(HoloEngine, ConformalExponentLimits) {
  // alpha1 -> alpha as Delta/v -> inf, and stays below alpha
  for (double a : {1.5, 3.0, 6.0}) {
    EXPECT_NEAR(alpha1_conformal(a, GapModel(1e3, 1)).exponent / a, 1.0, 1e-12);
    EXPECT_LT(alpha1_conformal(a, GapModel(1.0, 1)).exponent, a);
    // log of the deficit stays finite where alpha1 rounds to alpha
    EXPECT_TRUE(std::isfinite(log_alpha1_conformal_deficit(a, GapModel(1e4, 1))));
  }
  // small gap: alpha1 ~ alpha Delta / v
  EXPECT_NEAR(alpha1_conformal(3.0, GapModel(1e-4, 1)).exponent / 3e-4, 1.0, 1e-6);
}

TEST(HoloEngine, ConformalImprovesOnNonconformalAndPrior) {
  gen::Rng g(24);
  for (int c = 0; c < gen::kCases; ++c) {
    double a = g.uniform(1.1, 8);
    GapModel gap(g.log_uniform(1e-3, 1e3), 1.0);
    double conf = alpha1_conformal(a, gap).exponent;
    EXPECT_GE(conf, alpha1_nonconformal(a, gap).exponent - 1e-12);
    EXPECT_GE(conf, prior_exponents(InteractionClass::PowerLaw, a, gap).exponent - 1e-12);
  }
}

TEST(HoloEngine, ExponentialRowLimits) {
  // mu1 / prior -> 2 for a small gap
  for (double mu : {0.5, 1.0, 3.0}) {
    GapModel gap(1e-3, 1.0);
    double ratio = mu1_exponential(mu, gap).exponent / prior_exponents(InteractionClass::Exponential, mu, gap).exponent;
    EXPECT_NEAR(ratio, 2.0, 0.02);
  }
  auto fam = make_kappa_family([](double k) { return 2.0 * k; }, {0.5, 1.0});
  EXPECT_NEAR(mu1_kappa_family(fam, GapModel(1, 1)).exponent, mu1_exponential(1.0, GapModel(1, 2)).exponent, 1e-14);
}

TEST(HoloEngine, LargeAlphaAndQacRows) {
  auto b = alpha1_large_alpha(5.0, 1, GapModel(1, 1));
  EXPECT_EQ(b.exponent, 5.0);
  EXPECT_NEAR(b.constants.at("gamma"), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(alpha1_large_alpha(2.0, 1, GapModel(1, 1)), DomainError);
  EXPECT_FALSE(qac_comparison_exponent(2.0, 1).has_value());
  EXPECT_EQ(qac_comparison_exponent(5.0, 1)->exponent, 3.0);
  EXPECT_EQ(qac_comparison_exponent(7.0, 2)->exponent, 4.0);
}

TEST(HoloEngine, NonconformalClosedForm) {
  // v >= Delta: theta0 = pi/2, exponent (2 alpha Delta)/(pi v)
  EXPECT_NEAR(alpha1_nonconformal(3.0, GapModel(0.5, 1.0)).exponent, 3.0 / std::numbers::pi, 1e-14);
  // v << Delta: exponent -> alpha
  EXPECT_NEAR(alpha1_nonconformal(3.0, GapModel(1e6, 1.0)).exponent, 3.0, 1e-5);
}
