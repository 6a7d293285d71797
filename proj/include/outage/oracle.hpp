#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "outage/marginals.hpp"

// Independent numerical checks that never touch the depbounds machinery:
// a rearrangement estimator of dependence-extremal quantiles of the gain sum
// and Monte Carlo simulation of iid / comonotonic couplings.
namespace outage {

enum class AtomOffset { kLower, kMid, kUpper };

struct ProbabilityBlock {
  double lo;
  double hi;
};

// N x n matrix stored column-major; column j holds quantile atoms of marginal
// j over the probability block.
class QuantileMatrix {
 public:
  QuantileMatrix(std::size_t rows, std::size_t cols, ProbabilityBlock block);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ProbabilityBlock block() const { return block_; }

  std::span<double> column(std::size_t j);
  std::span<const double> column(std::size_t j) const;
  double at(std::size_t row, std::size_t col) const { return data_[col * rows_ + row]; }

  std::vector<double> row_sums() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  ProbabilityBlock block_;
  std::vector<double> data_;
};

// Column j holds G_j(p + (q - p)(k + alpha) / N), k = 0..N-1, alpha in
// {0, 1/2, 1}. An infinite atom at u = 1 is clamped to G(1 - (q - p) / (2N)).
QuantileMatrix discretize(std::span<const Marginal> ms, ProbabilityBlock block, std::size_t rows,
                          AtomOffset offset);

enum class RaMode {
  // Upper block [eps, 1], minimum row sum: estimates phi(eps).
  kMaxQuantile,
  // Lower block [0, eps], maximum row sum: estimates -phi_minus(1 - eps).
  kMinQuantile,
};

struct RaResult {
  double extremal_sum;
  int iterations;
  bool converged;
  // Extremal row sum after the initial shuffle and after every pass.
  std::vector<double> trace;
};

struct RaOptions {
  std::size_t rows = 2000;
  AtomOffset offset = AtomOffset::kMid;
  int max_passes = 100;
  std::uint64_t seed = 1;
};

// One rearrangement pass: every column in turn is reordered oppositely to the
// sum of the other columns (its largest entry against the smallest sum). Ties
// in that sum keep the column's current order, then row index. Returns true
// if any entry moved.
bool rearrange_pass(QuantileMatrix& matrix);

// Repeats rearrange_pass from a seeded random initial order until a pass
// changes nothing or options.max_passes is reached.
RaResult ra_extremal_quantile(std::span<const Marginal> ms, double epsilon, RaMode mode,
                              const RaOptions& options = {});

enum class Coupling { kIid, kComonotonic };

struct McEstimate {
  double value;
  double standard_error;
  long long samples;
};

// Fraction of draws with sum of gains < s.
McEstimate mc_outage(std::span<const Marginal> ms, double s, Coupling coupling, long long samples,
                     std::uint64_t seed);

struct InverseSumEstimate {
  double mean;
  double variance;
  double standard_error;
  long long samples;
  // variance / mean^2 above kUnstableDispersion: the estimate is dominated by
  // a handful of draws and the expectation is likely infinite.
  bool unstable;
};

inline constexpr double kUnstableDispersion = 100.0;

InverseSumEstimate mc_expect_inv_sum(std::span<const Marginal> ms, Coupling coupling,
                                     long long samples, std::uint64_t seed);

}  // namespace outage
