#include <gtest/gtest.h>

#include <numbers>

#include "locbounds/correlation_bounds.hpp"
#include "unit/gen.hpp"

using namespace locbounds;

namespace {

struct InverseSquare {
  double c;
  double log_value(double y) const { return std::log(c) - 2.0 * std::log(y); }
};

}  // namespace

TEST(Correlation, InverseLinearAxisIntegral) {
  for (double mu : {-3.0, -0.2, 0.7, 5.0}) {
    auto a = inverse_linear_axis_integral(mu);
    EXPECT_NEAR(std::abs(a.numeric - a.exact), 0.0, 1e-10) << mu;
  }
  EXPECT_THROW(inverse_linear_axis_integral(0.0), DomainError);
}

// c/y^2 envelope: y0 = sqrt(c/b0), tail = c/y0, bound = (2 y0 b0 + 2 c/y0)/(2 pi).
TEST(Correlation, ClosedFormForInverseSquareEnvelope) {
  gen::Rng g(31);
  for (int k = 0; k < 40; ++k) {
    double c = g.log_uniform(0.1, 10), b0 = g.log_uniform(0.01, 1);
    GapModel gap(1.0, g.log_uniform(0.5, 5));
    InverseSquare env{c};
    auto cb = correlation_bound(env, 1.0, gap, b0);
    double y0 = std::sqrt(c / b0);
    ASSERT_TRUE(cb.y0_from_root);
    EXPECT_NEAR(cb.y0 / y0, 1.0, 1e-10);
    EXPECT_NEAR(cb.tail_integral / (c / y0), 1.0, 1e-8);
    EXPECT_NEAR(cb.value / ((2 * y0 * b0 + 2 * c / y0) / (2 * std::numbers::pi)), 1.0, 1e-8);
  }
}

TEST(Correlation, DivergentTailIsReported) {
  EXPECT_THROW(correlation_bound(InverseYEnvelope{1.0}, 1.0, GapModel(1, 1), 0.5), TailDivergenceError);
}

TEST(Correlation, BoundDecaysWithDistance) {
  HastingsKoma k{1, 1, 3, 1, 1, true};
  GapModel gap(1.0, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double r : {10.0, 100.0, 1000.0}) {
    OmegaBarEnvelope env(k, r);
    double b0 = std::exp(optimize_rho(env, gap).log_bound);
    auto cb = correlation_bound(env, r, gap, b0);
    EXPECT_TRUE(std::isfinite(cb.value));
    EXPECT_LT(cb.value, prev);
    prev = cb.value;
  }
}

TEST(Correlation, AxisDominanceReport) {
  auto om = [](double y) { return std::complex<double>(0.0, -2.0 / std::hypot(1.0, y)); };
  auto rep = axis_dominance_check(om, 2.0, default_axis_grid(1.0));
  EXPECT_TRUE(rep.passed);
  EXPECT_NEAR(rep.max_excess, 0.0, 1e-15);
  EXPECT_FALSE(axis_dominance_check(om, 1.9, {0.0}).passed);
  EXPECT_THROW(axis_dominance_check(om, 1.0, {}), DomainError);
}
