#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "outage/depbounds.hpp"
#include "outage/errors.hpp"
#include "outage/numerics.hpp"
#include "outage/oracle.hpp"

namespace outage {
namespace {

const Marginal kExp = Marginal::exponential(1.0);

std::vector<double> sorted_column(const QuantileMatrix& m, std::size_t j) {
  auto col = m.column(j);
  std::vector<double> v(col.begin(), col.end());
  std::sort(v.begin(), v.end());
  return v;
}

TEST(Discretize, MidOffsetAtoms) {
  const std::vector<Marginal> ms{kExp};
  const auto m = discretize(ms, {0.0, 1.0}, 4, AtomOffset::kMid);
  const double u[] = {0.125, 0.375, 0.625, 0.875};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(m.at(k, 0), kExp.quantile(u[k]), 1e-14);
}

TEST(Discretize, IdenticalColumns) {
  const std::vector<Marginal> ms{kExp, kExp};
  const auto m = discretize(ms, {0.2, 1.0}, 50, AtomOffset::kMid);
  EXPECT_EQ(sorted_column(m, 0), sorted_column(m, 1));
}

TEST(Discretize, OffsetsBracketMidAtoms) {
  const std::vector<Marginal> ms{kExp, Marginal::uniform(0.0, 1.0)};
  for (ProbabilityBlock block : {ProbabilityBlock{0.0, 0.3}, ProbabilityBlock{0.3, 1.0}}) {
    const auto lo = discretize(ms, block, 20, AtomOffset::kLower);
    const auto mid = discretize(ms, block, 20, AtomOffset::kMid);
    const auto hi = discretize(ms, block, 20, AtomOffset::kUpper);
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 20; ++k) {
        EXPECT_LE(lo.at(k, j), mid.at(k, j));
        EXPECT_LE(mid.at(k, j), hi.at(k, j));
      }
    }
  }
}

TEST(Discretize, ClampsInfiniteTopAtom) {
  const std::vector<Marginal> ms{kExp};
  const auto m = discretize(ms, {0.5, 1.0}, 10, AtomOffset::kUpper);
  EXPECT_NEAR(m.at(9, 0), kExp.quantile(1.0 - 0.5 / 20.0), 1e-12);
}

TEST(Discretize, RejectsBadInput) {
  const std::vector<Marginal> ms{kExp};
  EXPECT_THROW(discretize(ms, {0.5, 0.5}, 10, AtomOffset::kMid), DomainError);
  EXPECT_THROW(discretize(ms, {0.0, 1.1}, 10, AtomOffset::kMid), DomainError);
  EXPECT_THROW(discretize(ms, {0.0, 1.0}, 1, AtomOffset::kMid), DomainError);
  EXPECT_THROW(discretize({}, {0.0, 1.0}, 10, AtomOffset::kMid), DomainError);
}

TEST(Rearrange, PassPreservesColumnMultisets) {
  const std::vector<Marginal> ms{kExp, kExp, Marginal::uniform(0.0, 2.0)};
  auto m = discretize(ms, {0.1, 1.0}, 200, AtomOffset::kMid);
  std::vector<std::vector<double>> before;
  for (std::size_t j = 0; j < 3; ++j) before.push_back(sorted_column(m, j));
  for (int pass = 0; pass < 5; ++pass) {
    rearrange_pass(m);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(sorted_column(m, j), before[j]);
  }
}

TEST(Rearrange, TraceIsMonotone) {
  for (int n : {2, 3, 5}) {
    const std::vector<Marginal> ms(n, kExp);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      RaOptions opt;
      opt.rows = 500;
      opt.seed = seed;
      const auto hi = ra_extremal_quantile(ms, 0.1, RaMode::kMaxQuantile, opt);
      for (std::size_t k = 1; k < hi.trace.size(); ++k) EXPECT_GE(hi.trace[k], hi.trace[k - 1]);
      const auto lo = ra_extremal_quantile(ms, 0.1, RaMode::kMinQuantile, opt);
      for (std::size_t k = 1; k < lo.trace.size(); ++k) EXPECT_LE(lo.trace[k], lo.trace[k - 1]);
    }
  }
}

TEST(Rearrange, ConvergedMeansStablePass) {
  const std::vector<Marginal> ms(3, kExp);
  RaOptions opt;
  opt.rows = 300;
  const auto r = ra_extremal_quantile(ms, 0.2, RaMode::kMaxQuantile, opt);
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations) + 1);
  EXPECT_EQ(r.trace[r.trace.size() - 1], r.trace[r.trace.size() - 2]);
}

TEST(Rearrange, ReportsNonConvergence) {
  const std::vector<Marginal> ms(5, kExp);
  RaOptions opt;
  opt.max_passes = 1;
  const auto r = ra_extremal_quantile(ms, 0.1, RaMode::kMaxQuantile, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(std::isfinite(r.extremal_sum));
}

TEST(Rearrange, DeterministicForSeed) {
  const std::vector<Marginal> ms(3, kExp);
  RaOptions opt;
  opt.rows = 400;
  opt.seed = 42;
  const auto a = ra_extremal_quantile(ms, 0.05, RaMode::kMaxQuantile, opt);
  const auto b = ra_extremal_quantile(ms, 0.05, RaMode::kMaxQuantile, opt);
  EXPECT_EQ(a.extremal_sum, b.extremal_sum);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Rearrange, TwoLinkAgreesWithPhi) {
  const std::vector<Marginal> ms(2, kExp);
  const auto best = ra_extremal_quantile(ms, 0.01, RaMode::kMaxQuantile, RaOptions{});
  ASSERT_TRUE(best.converged);
  const double phi_ref = phi(kExp, 2, 0.01).value;
  EXPECT_LE(std::abs(best.extremal_sum - phi_ref) / phi_ref, 0.02);

  const auto worst = ra_extremal_quantile(ms, 0.5, RaMode::kMinQuantile, RaOptions{});
  ASSERT_TRUE(worst.converged);
  const double worst_ref = -phi_minus(kExp, 2, 0.5).value;
  EXPECT_LE(std::abs(worst.extremal_sum - worst_ref) / worst_ref, 0.02);
}

TEST(Rearrange, SingleColumnIsBlockEdgeQuantile) {
  const std::vector<Marginal> ms{kExp};
  for (RaMode mode : {RaMode::kMaxQuantile, RaMode::kMinQuantile}) {
    const auto r = ra_extremal_quantile(ms, 0.3, mode, RaOptions{});
    const double step = kExp.quantile(0.3 + 0.7 / 2000) - kExp.quantile(0.3 - 0.3 / 2000);
    EXPECT_NEAR(r.extremal_sum, kExp.quantile(0.3), step);
  }
}

TEST(Rearrange, ErrorShrinksWithRows) {
  for (int n : {2, 3}) {
    const std::vector<Marginal> ms(n, kExp);
    for (double eps : {0.01, 0.1}) {
      const double best_ref = phi(kExp, n, eps).value;
      const double worst_ref = -phi_minus(kExp, n, 1.0 - eps).value;
      RaOptions coarse;
      coarse.rows = 500;
      RaOptions fine;
      fine.rows = 4000;
      auto err = [](double v, double ref) { return std::abs(v - ref) / std::abs(ref); };
      EXPECT_LE(err(ra_extremal_quantile(ms, eps, RaMode::kMaxQuantile, fine).extremal_sum, best_ref),
                err(ra_extremal_quantile(ms, eps, RaMode::kMaxQuantile, coarse).extremal_sum,
                    best_ref));
      EXPECT_LE(
          err(ra_extremal_quantile(ms, eps, RaMode::kMinQuantile, fine).extremal_sum, worst_ref),
          err(ra_extremal_quantile(ms, eps, RaMode::kMinQuantile, coarse).extremal_sum,
              worst_ref));
    }
  }
}

TEST(Rearrange, RejectsBadInput) {
  const std::vector<Marginal> ms(2, kExp);
  EXPECT_THROW(ra_extremal_quantile(ms, 0.0, RaMode::kMaxQuantile, RaOptions{}), DomainError);
  RaOptions tiny;
  tiny.rows = 5;
  EXPECT_THROW(ra_extremal_quantile(ms, 0.1, RaMode::kMaxQuantile, tiny), DomainError);
}

TEST(MonteCarlo, ComonotonicHitsEpsilon) {
  for (int n : {2, 5}) {
    const std::vector<Marginal> ms(n, kExp);
    for (double eps : {0.05, 0.5}) {
      const auto mc = mc_outage(ms, n * kExp.quantile(eps), Coupling::kComonotonic, 200000, 9);
      EXPECT_LE(std::abs(mc.value - eps), 3.0 * mc.standard_error);
    }
  }
}

TEST(MonteCarlo, IidMatchesGammaCdf) {
  const std::vector<Marginal> ms(5, kExp);
  for (double s : {2.0, 5.0, 8.0}) {
    const auto mc = mc_outage(ms, s, Coupling::kIid, 200000, 13);
    EXPECT_LE(std::abs(mc.value - reg_lower_gamma(5, s)), 3.0 * mc.standard_error);
  }
}

TEST(MonteCarlo, ZeroThresholdNeverOutage) {
  const std::vector<Marginal> ms(3, kExp);
  EXPECT_EQ(mc_outage(ms, 0.0, Coupling::kIid, 10000, 1).value, 0.0);
  EXPECT_EQ(mc_outage(ms, 0.0, Coupling::kComonotonic, 10000, 1).value, 0.0);
}

TEST(MonteCarlo, IidWithinAnalyticSandwich) {
  for (int n : {2, 5}) {
    const std::vector<Marginal> ms(n, kExp);
    for (double s = 0.5; s < 3.0 * n; s += 0.5 * n) {
      const auto mc = mc_outage(ms, s, Coupling::kIid, 100000, 21);
      EXPECT_GE(mc.value + 3.0 * mc.standard_error, worst_case_tail(kExp, n, s)) << "s=" << s;
    }
  }
}

TEST(MonteCarlo, InverseSumIid) {
  const std::vector<Marginal> ms(5, kExp);
  const auto est = mc_expect_inv_sum(ms, Coupling::kIid, 200000, 4);
  EXPECT_NEAR(est.mean, 0.25, 3.0 * est.standard_error);
}

TEST(MonteCarlo, InverseSumComonotonicIsUnstable) {
  const std::vector<Marginal> ms(2, kExp);
  const auto est = mc_expect_inv_sum(ms, Coupling::kComonotonic, 1000000, 4);
  EXPECT_TRUE(est.unstable);
}

TEST(MonteCarlo, InverseSumBoundedSupport) {
  const std::vector<Marginal> ms(3, Marginal::uniform(1.0, 2.0));
  for (Coupling c : {Coupling::kIid, Coupling::kComonotonic}) {
    const auto est = mc_expect_inv_sum(ms, c, 50000, 8);
    EXPECT_GE(est.mean, 1.0 / 6.0);
    EXPECT_LE(est.mean, 1.0 / 3.0);
    EXPECT_FALSE(est.unstable);
  }
}

TEST(MonteCarlo, DeterministicForSeed) {
  const std::vector<Marginal> ms(3, kExp);
  EXPECT_EQ(mc_outage(ms, 2.0, Coupling::kIid, 5000, 77).value,
            mc_outage(ms, 2.0, Coupling::kIid, 5000, 77).value);
}

}  // namespace
}  // namespace outage
