#include "outage/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>
#include <string>

#include "outage/errors.hpp"

namespace outage {
namespace {

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Unbiased index in [0, bound) by rejection; independent of the standard
// library's distribution implementations.
std::size_t bounded_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % bound);
}

double extremal(const std::vector<double>& sums, RaMode mode) {
  return mode == RaMode::kMaxQuantile ? *std::min_element(sums.begin(), sums.end())
                                      : *std::max_element(sums.begin(), sums.end());
}

void require_marginals(std::span<const Marginal> ms) {
  if (ms.empty()) throw DomainError("oracle: marginal list is empty");
}

}  // namespace

QuantileMatrix::QuantileMatrix(std::size_t rows, std::size_t cols, ProbabilityBlock block)
    : rows_(rows), cols_(cols), block_(block), data_(rows * cols, 0.0) {}

std::span<double> QuantileMatrix::column(std::size_t j) {
  return {data_.data() + j * rows_, rows_};
}

std::span<const double> QuantileMatrix::column(std::size_t j) const {
  return {data_.data() + j * rows_, rows_};
}

std::vector<double> QuantileMatrix::row_sums() const {
  std::vector<double> sums(rows_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) {
    const auto col = column(j);
    for (std::size_t k = 0; k < rows_; ++k) sums[k] += col[k];
  }
  return sums;
}

QuantileMatrix discretize(std::span<const Marginal> ms, ProbabilityBlock block, std::size_t rows,
                          AtomOffset offset) {
  require_marginals(ms);
  if (!(block.lo >= 0.0 && block.lo < block.hi && block.hi <= 1.0)) {
    throw DomainError("discretize: block must satisfy 0 <= p < q <= 1");
  }
  if (rows < 2) throw DomainError("discretize: need at least two rows");
  const double alpha = offset == AtomOffset::kLower ? 0.0 : offset == AtomOffset::kMid ? 0.5 : 1.0;
  const double width = block.hi - block.lo;
  const double n_rows = static_cast<double>(rows);

  QuantileMatrix matrix(rows, ms.size(), block);
  for (std::size_t j = 0; j < ms.size(); ++j) {
    auto col = matrix.column(j);
    for (std::size_t k = 0; k < rows; ++k) {
      const double step = (static_cast<double>(k) + alpha) / n_rows;
      double atom;
      if (block.hi == 1.0) {
        // Work with 1 - u near the top to keep the tail atoms accurate.
        const double complement = width * (1.0 - step);
        atom = complement > 0.0 ? ms[j].upper_quantile(complement) : ms[j].quantile(1.0);
        if (std::isinf(atom)) atom = ms[j].upper_quantile(width / (2.0 * n_rows));
      } else {
        atom = ms[j].quantile(block.lo + width * step);
      }
      col[k] = atom;
    }
  }
  return matrix;
}

bool rearrange_pass(QuantileMatrix& matrix) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  std::vector<double> others(rows);
  std::vector<std::size_t> order(rows);
  std::vector<double> sorted(rows);
  bool changed = false;

  for (std::size_t j = 0; j < cols; ++j) {
    std::fill(others.begin(), others.end(), 0.0);
    // Summed column by column in a fixed order so that identical rows give
    // bit-identical sums.
    for (std::size_t i = 0; i < cols; ++i) {
      if (i == j) continue;
      const auto col = matrix.column(i);
      for (std::size_t k = 0; k < rows; ++k) others[k] += col[k];
    }
    auto col = matrix.column(j);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (others[x] != others[y]) return others[x] < others[y];
      if (col[x] != col[y]) return col[x] > col[y];
      return x < y;
    });
    std::copy(col.begin(), col.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t k = order[r];
      if (col[k] != sorted[r]) {
        changed = true;
        col[k] = sorted[r];
      }
    }
  }
  return changed;
}

RaResult ra_extremal_quantile(std::span<const Marginal> ms, double epsilon, RaMode mode,
                              const RaOptions& options) {
  require_marginals(ms);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("ra_extremal_quantile: epsilon must lie in (0, 1)");
  }
  if (options.rows < 10) throw DomainError("ra_extremal_quantile: need at least 10 rows");
  if (options.max_passes < 1) throw DomainError("ra_extremal_quantile: max_passes must be >= 1");

  const ProbabilityBlock block =
      mode == RaMode::kMaxQuantile ? ProbabilityBlock{epsilon, 1.0} : ProbabilityBlock{0.0, epsilon};
  QuantileMatrix matrix = discretize(ms, block, options.rows, options.offset);

  std::mt19937_64 rng(options.seed);
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    auto col = matrix.column(j);
    for (std::size_t k = col.size() - 1; k > 0; --k) {
      std::swap(col[k], col[bounded_index(rng, k + 1)]);
    }
  }

  RaResult result{};
  result.trace.push_back(extremal(matrix.row_sums(), mode));
  while (result.iterations < options.max_passes) {
    const bool changed = rearrange_pass(matrix);
    ++result.iterations;
    result.trace.push_back(extremal(matrix.row_sums(), mode));
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  result.extremal_sum = result.trace.back();
  return result;
}

McEstimate mc_outage(std::span<const Marginal> ms, double s, Coupling coupling, long long samples,
                     std::uint64_t seed) {
  require_marginals(ms);
  if (samples < 1) throw DomainError("mc_outage: need at least one sample");
  std::mt19937_64 rng(seed);
  long long below = 0;
  for (long long k = 0; k < samples; ++k) {
    double sum = 0.0;
    if (coupling == Coupling::kComonotonic) {
      const double u = open_uniform(rng);
      for (const auto& m : ms) sum += m.law().quantile(u);
    } else {
      for (const auto& m : ms) sum += m.law().quantile(open_uniform(rng));
    }
    if (sum < s) ++below;
  }
  const double p = static_cast<double>(below) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples};
}

InverseSumEstimate mc_expect_inv_sum(std::span<const Marginal> ms, Coupling coupling,
                                     long long samples, std::uint64_t seed) {
  require_marginals(ms);
  if (samples < 1) throw DomainError("mc_expect_inv_sum: need at least one sample");
  std::mt19937_64 rng(seed);
  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  for (long long k = 0; k < samples; ++k) {
    double sum = 0.0;
    if (coupling == Coupling::kComonotonic) {
      const double u = open_uniform(rng);
      for (const auto& m : ms) sum += m.law().quantile(u);
    } else {
      for (const auto& m : ms) sum += m.law().quantile(open_uniform(rng));
    }
    const double x = 1.0 / sum;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  InverseSumEstimate est{};
  est.mean = mean;
  est.variance = variance;
  est.standard_error = std::sqrt(variance / static_cast<double>(samples));
  est.samples = samples;
  est.unstable = !std::isfinite(mean) || variance > kUnstableDispersion * mean * mean;
  return est;
}

}  // namespace outage
