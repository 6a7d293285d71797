#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "outage/depbounds.hpp"
#include "outage/errors.hpp"
#include "outage/oracle.hpp"

namespace outage {
namespace {

const Marginal kExp = Marginal::exponential(1.0);

TEST(HA, TwoLinkAtHalf) { EXPECT_NEAR(h_a(kExp, 2, 0.0, 0.5), 2.0 * std::log(2.0), 1e-14); }

TEST(HA, FiveLinksSmallX) {
  const double expected = 4.0 * -std::log(1.0 - 0.04) - std::log(0.01);
  EXPECT_NEAR(h_a(kExp, 5, 0.0, 0.01), expected, 1e-12);
  EXPECT_NEAR(expected, 4.768, 1e-3);
}

TEST(HA, RightEndpointCollapses) {
  for (int n : {2, 3, 7}) {
    for (double a : {0.0, 0.3, 0.8}) {
      const double b = (1.0 - a) / n;
      EXPECT_NEAR(h_a(kExp, n, a, b), n * kExp.quantile(1.0 - b), 1e-12);
    }
  }
}

TEST(HA, RejectsOutOfRangeX) {
  EXPECT_THROW(h_a(kExp, 3, 0.0, 0.5), DomainError);
  EXPECT_THROW(h_a(kExp, 3, 0.0, -0.1), DomainError);
  EXPECT_THROW(h_a(kExp, 3, 1.5, 0.0), DomainError);
  EXPECT_THROW(h_a(kExp, 0, 0.0, 0.0), DomainError);
}

TEST(CMin, TwoLinkRayleigh) {
  const auto sol = c_min(kExp, 2, 0.0);
  EXPECT_NEAR(sol.c, 0.5, 1e-9);
  EXPECT_EQ(sol.branch, CminBranch::kPositive);
}

TEST(CMin, ReferenceValues) {
  // Independent bisection of the closed-form exponential inequality.
  EXPECT_NEAR(c_min(kExp, 3, 0.0).c, 0.0945415778, 1e-9);
  EXPECT_NEAR(c_min(kExp, 5, 0.0).c, 0.0079596980, 1e-9);
  EXPECT_NEAR(c_min(kExp, 10, 0.0).c, 4.5588654e-5, 1e-10);
}

TEST(CMin, IndependentOfRate) {
  for (int n : {3, 5}) {
    EXPECT_NEAR(c_min(Marginal::exponential(4.0), n, 0.2).c, c_min(kExp, n, 0.2).c, 1e-12);
  }
}

TEST(CMin, CollapsesAsAGoesToOne) {
  const auto sol = c_min(kExp, 4, 1.0);
  EXPECT_EQ(sol.c, 0.0);
  EXPECT_LE(c_min(kExp, 4, 0.999).c, 0.001 / 4);
}

TEST(CMin, StaysInInterval) {
  for (const auto& m : {kExp, Marginal::uniform(0.0, 1.0), negate(kExp), Marginal::uniform(1.0, 2.0)}) {
    for (int n : {1, 2, 3, 5, 10}) {
      for (double a = 0.0; a < 1.0; a += 0.07) {
        const auto sol = c_min(m, n, a);
        EXPECT_GE(sol.c, 0.0);
        EXPECT_LE(sol.c, (1.0 - a) / n * (1.0 + 1e-12)) << m.id() << " n=" << n << " a=" << a;
      }
    }
  }
}

TEST(CMin, ClosedFormAgreesWithQuadrature) {
  for (const auto& m : {kExp, negate(kExp)}) {
    for (int n : {2, 3, 5, 10}) {
      for (double a : {0.0, 0.05, 0.3, 0.7, 0.95}) {
        const double closed = c_min(m, n, a, CminMethod::kAuto).c;
        const double numeric = c_min(m, n, a, CminMethod::kQuadrature).c;
        EXPECT_NEAR(closed, numeric, 1e-6) << m.id() << " n=" << n << " a=" << a;
      }
    }
  }
}

TEST(CMin, NegatedExponentialThresholds) {
  EXPECT_NEAR(min_a_with_zero_cmin_minus(kExp, 3), 0.116586033, 1e-7);
  EXPECT_NEAR(min_a_with_zero_cmin_minus(kExp, 10), 4.56073745e-5, 1e-10);
  const double t3 = min_a_with_zero_cmin_minus(kExp, 3);
  EXPECT_EQ(c_min(negate(kExp), 3, t3 * 1.01).branch, CminBranch::kZero);
  EXPECT_EQ(c_min(negate(kExp), 3, t3 * 0.99).branch, CminBranch::kPositive);
}

TEST(Phi, TwoLinkRayleigh) {
  const auto v = phi(kExp, 2, 0.0);
  EXPECT_NEAR(v.value, 2.0 * std::log(2.0), 1e-9);
  EXPECT_EQ(v.formula_branch, PhiBranch::kHAtCmin);
}

TEST(Phi, FiveLinks) { EXPECT_NEAR(phi(kExp, 5, 0.0).value, 4.96279089, 1e-7); }

TEST(Phi, BoundedByNLogN) {
  for (int n = 2; n <= 10; ++n) EXPECT_LE(phi(kExp, n, 0.0).value, n * std::log(n) + 1e-12);
}

TEST(Phi, PositiveAtZeroForDecreasingDensities) {
  for (const auto& m : {kExp, Marginal::uniform(0.0, 1.0)}) {
    for (int n = 2; n <= 10; ++n) EXPECT_GT(phi(m, n, 0.0).value, 0.0);
  }
}

TEST(Phi, StrictlyIncreasing) {
  for (const auto& m : {kExp, Marginal::uniform(0.0, 1.0)}) {
    for (int n : {2, 3, 5, 10}) {
      double prev = -INFINITY;
      for (double a = 0.0; a < 0.999; a += 0.01) {
        const double v = phi(m, n, a).value;
        EXPECT_GT(v, prev) << m.id() << " n=" << n << " a=" << a;
        prev = v;
      }
    }
  }
}

TEST(Phi, BelowConditionalExpectationBound) {
  for (int n : {2, 3, 5}) {
    const std::vector<Marginal> ms(n, kExp);
    for (double a = 0.0; a < 1.0; a += 0.05) {
      EXPECT_LE(phi(kExp, n, a).value, big_phi(ms, a) + 1e-12);
    }
  }
}

TEST(Phi, SingleLinkIsQuantile) {
  for (double a : {0.0, 0.2, 0.9}) EXPECT_NEAR(phi(kExp, 1, a).value, kExp.quantile(a), 1e-12);
}

TEST(Phi, RejectsAOfOne) { EXPECT_THROW(phi(kExp, 3, 1.0), DomainError); }

TEST(PhiMinus, ZeroAtOne) {
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(phi_minus(kExp, n, 1.0).value, 0.0);
}

TEST(PhiMinus, ExponentialClosedForm) {
  for (int n : {3, 5, 10}) {
    for (double a : {0.3, 0.6, 0.99}) {
      const double expected = n * (a - a * std::log(a) - 1.0) / (1.0 - a);
      EXPECT_NEAR(phi_minus(kExp, n, a).value, expected, 1e-10) << "n=" << n << " a=" << a;
    }
  }
}

TEST(PhiMinus, TenLinksNearOne) { EXPECT_NEAR(phi_minus(kExp, 10, 0.99).value, -0.0502, 1e-4); }

TEST(PhiMinus, NonPositive) {
  for (const auto& m : {kExp, Marginal::uniform(0.0, 1.0)}) {
    for (int n : {2, 3, 5}) {
      for (double a = 0.01; a <= 1.0; a += 0.01) EXPECT_LE(phi_minus(m, n, a).value, 0.0);
    }
  }
}

TEST(PhiMinus, RejectsUnsupportedMarginals) {
  EXPECT_THROW(phi_minus(Marginal::uniform(1.0, 2.0), 3, 0.5), UnsupportedDistributionError);
  EXPECT_THROW(phi_minus(negate(kExp), 3, 0.5), UnsupportedDistributionError);
  EXPECT_THROW(phi_minus(kExp, 3, 0.0), DivergenceError);
}

TEST(BigPhi, HomogeneousExponentialAtZero) {
  for (int n : {1, 2, 5}) EXPECT_NEAR(big_phi(std::vector<Marginal>(n, kExp), 0.0), n, 1e-12);
}

TEST(BigPhi, SingleMarginalMean) {
  const std::vector<Marginal> one{Marginal::uniform(1.0, 2.0)};
  EXPECT_NEAR(big_phi(one, 0.0), 1.5, 1e-12);
}

TEST(BigPhi, HeterogeneousExponentials) {
  const std::vector<Marginal> ms{Marginal::exponential(0.5), Marginal::exponential(2.0), kExp, kExp,
                                 kExp};
  const double expected = 5.5 * (1.0 - std::log(0.9));
  EXPECT_NEAR(big_phi(ms, 0.1), expected, 1e-12);
  EXPECT_NEAR(expected, 6.0795, 1e-4);
  double quadrature = 0.0;
  for (const auto& m : ms) quadrature += integrated_quantile_numeric(m, 0.1, 1.0) / 0.9;
  EXPECT_NEAR(quadrature, expected, 1e-7);
}

TEST(BigPhiMinus, ZeroAtOneWhenGainsStartAtZero) {
  EXPECT_EQ(big_phi_minus(std::vector<Marginal>(4, kExp), 1.0), 0.0);
}

TEST(BigPhiMinus, MatchesPhiMinusOnZeroBranch) {
  for (int n : {3, 10}) {
    const std::vector<Marginal> ms(n, kExp);
    const double threshold = min_a_with_zero_cmin_minus(kExp, n);
    for (double a : {0.5, 0.9, 0.99}) {
      ASSERT_GT(a, threshold);
      EXPECT_NEAR(big_phi_minus(ms, a), phi_minus(kExp, n, a).value, 1e-10);
    }
  }
  EXPECT_NEAR(big_phi_minus(std::vector<Marginal>(10, kExp), 0.99), -0.0502, 1e-4);
}

TEST(RequireHomogeneous, RejectsMixedLists) {
  const std::vector<Marginal> mixed{kExp, Marginal::exponential(2.0)};
  EXPECT_THROW(require_homogeneous(mixed), UnsupportedDistributionError);
  const std::vector<Marginal> same{kExp, Marginal::exponential(1.0)};
  EXPECT_EQ(require_homogeneous(same).id(), kExp.id());
}

TEST(WorstCaseTail, ZeroBelowPhiAtZero) {
  EXPECT_EQ(worst_case_tail(kExp, 2, 1.0), 0.0);
  EXPECT_EQ(worst_case_tail(kExp, 2, 2.0 * std::log(2.0) - 1e-9), 0.0);
}

TEST(WorstCaseTail, InvertsPhi) {
  for (int n : {2, 5}) {
    const double s = phi(kExp, n, 0.3).value;
    EXPECT_NEAR(worst_case_tail(kExp, n, s), 0.3, 1e-9);
  }
}

TEST(WorstCaseTail, FiveLinksAgainstRearrangement) {
  const double a = worst_case_tail(kExp, 5, 6.0);
  EXPECT_GT(a, 0.0);
  EXPECT_LT(a, 1.0);
  const std::vector<Marginal> ms(5, kExp);
  const auto ra = ra_extremal_quantile(ms, a, RaMode::kMaxQuantile, RaOptions{});
  ASSERT_TRUE(ra.converged);
  EXPECT_NEAR(ra.extremal_sum, 6.0, 0.02 * 6.0);
}

TEST(WorstCaseTail, BoundedSupportSaturates) {
  EXPECT_EQ(worst_case_tail(Marginal::uniform(0.0, 1.0), 3, 3.5), 1.0);
}

}  // namespace
}  // namespace outage
