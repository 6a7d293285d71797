#include "outage/marginals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include "outage/errors.hpp"
#include "outage/numerics.hpp"

namespace outage {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void require_probability(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(std::string(what) + ": probability " + format_double(u) +
                      " outside [0, 1]");
  }
}

// x log x with the continuous extension 0 at x = 0.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

const Tolerance kQuantileQuadrature{1e-12, 1e-11, 2000};

}  // namespace

const char* to_string(DensityShape shape) {
  return shape == DensityShape::kDecreasing ? "decreasing" : "increasing";
}

double Distribution::mean() const { return integrated_quantile(0.0, 1.0); }

double Distribution::integrated_quantile(double p, double q) const {
  return integrate([this](double u) { return quantile(u); }, p, q, kQuantileQuadrature);
}

Marginal::Marginal(std::shared_ptr<const Distribution> law) : law_(std::move(law)) {
  if (!law_) throw DomainError("Marginal: null distribution");
}

Marginal Marginal::exponential(double rate) {
  return Marginal(std::make_shared<ExponentialDistribution>(rate));
}

Marginal Marginal::uniform(double lo, double hi) {
  return Marginal(std::make_shared<UniformDistribution>(lo, hi));
}

double Marginal::quantile(double u) const {
  require_probability(u, "quantile");
  return law_->quantile(u);
}

double Marginal::upper_quantile(double v) const {
  require_probability(v, "upper_quantile");
  return law_->upper_quantile(v);
}

// ---------------------------------------------------------------------------
// Exponential

ExponentialDistribution::ExponentialDistribution(double rate) : rate_(rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("exponential: rate must be positive and finite");
  }
}

double ExponentialDistribution::cdf(double x) const {
  return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x);
}

// The + 0.0 turns -0 at the lower support edge into +0.
double ExponentialDistribution::quantile(double u) const { return -std::log1p(-u) / rate_ + 0.0; }

double ExponentialDistribution::upper_quantile(double v) const { return -std::log(v) / rate_ + 0.0; }

double ExponentialDistribution::density(double x) const {
  return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x);
}

Support ExponentialDistribution::support() const { return {0.0, kInf}; }

double ExponentialDistribution::integrated_quantile(double p, double q) const {
  // Antiderivative of -log(1 - u) is u + (1 - u) log(1 - u).
  const double upper = q + xlogx(1.0 - q);
  const double lower = p + xlogx(1.0 - p);
  return (upper - lower) / rate_;
}

std::string ExponentialDistribution::id() const { return "exp:" + format_double(rate_); }

// ---------------------------------------------------------------------------
// Uniform

UniformDistribution::UniformDistribution(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw DomainError("uniform: need finite lo < hi");
  }
  if (lo < 0.0) throw DomainError("uniform: channel gains must be nonnegative");
}

double UniformDistribution::cdf(double x) const {
  return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0);
}

double UniformDistribution::quantile(double u) const { return lo_ + (hi_ - lo_) * u; }

double UniformDistribution::upper_quantile(double v) const { return hi_ - (hi_ - lo_) * v; }

double UniformDistribution::density(double x) const {
  return (x < lo_ || x > hi_) ? 0.0 : 1.0 / (hi_ - lo_);
}

double UniformDistribution::integrated_quantile(double p, double q) const {
  return (q - p) * lo_ + 0.5 * (hi_ - lo_) * (q - p) * (q + p);
}

std::string UniformDistribution::id() const {
  return "uniform:" + format_double(lo_) + "," + format_double(hi_);
}

// ---------------------------------------------------------------------------
// Quantile table

QuantileTableDistribution::QuantileTableDistribution(std::vector<QuantilePoint> points,
                                                     DensityShape claimed)
    : points_(std::move(points)), shape_(claimed) {
  if (points_.size() < 2) throw DomainError("quantile table: need at least two rows");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& pt = points_[i];
    if (!(pt.probability >= 0.0 && pt.probability <= 1.0)) {
      throw DomainError("quantile table: probability outside [0, 1] in row " +
                        std::to_string(i + 1));
    }
    if (!std::isfinite(pt.gain) || pt.gain < 0.0) {
      throw DomainError("quantile table: gain must be finite and nonnegative in row " +
                        std::to_string(i + 1));
    }
    if (i > 0 && !(pt.probability > points_[i - 1].probability && pt.gain > points_[i - 1].gain)) {
      throw DomainError("quantile table: columns must be strictly increasing at row " +
                        std::to_string(i + 1));
    }
  }
  // FNV-1a over the exact bit patterns identifies the table content.
  std::uint64_t hash = 1469598103934665603ull;
  auto mix = [&hash](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      hash ^= (bits >> (8 * b)) & 0xffu;
      hash *= 1099511628211ull;
    }
  };
  for (const auto& pt : points_) {
    mix(pt.probability);
    mix(pt.gain);
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  id_ = std::string("table:") + buf + ":" + to_string(shape_);
}

bool QuantileTableDistribution::covers_unit_interval() const {
  return points_.front().probability == 0.0 && points_.back().probability == 1.0;
}

double QuantileTableDistribution::quantile(double u) const {
  if (u < points_.front().probability || u > points_.back().probability) {
    throw DomainError("quantile table: probability " + format_double(u) +
                      " outside the tabulated range");
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), u,
                             [](double v, const QuantilePoint& pt) { return v < pt.probability; });
  if (it == points_.end()) return points_.back().gain;
  const auto& right = *it;
  const auto& left = *(it - 1);
  const double t = (u - left.probability) / (right.probability - left.probability);
  return left.gain + t * (right.gain - left.gain);
}

double QuantileTableDistribution::cdf(double x) const {
  if (x < points_.front().gain) {
    if (points_.front().probability == 0.0) return 0.0;
    throw DomainError("quantile table: gain below the tabulated range");
  }
  if (x >= points_.back().gain) {
    if (points_.back().probability == 1.0) return 1.0;
    if (x == points_.back().gain) return points_.back().probability;
    throw DomainError("quantile table: gain above the tabulated range");
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const QuantilePoint& pt) { return v < pt.gain; });
  const auto& right = *it;
  const auto& left = *(it - 1);
  const double t = (x - left.gain) / (right.gain - left.gain);
  return left.probability + t * (right.probability - left.probability);
}

double QuantileTableDistribution::density(double x) const {
  if (x < points_.front().gain || x > points_.back().gain) return 0.0;
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const QuantilePoint& pt) { return v < pt.gain; });
  if (it == points_.end()) --it;
  const auto& right = *it;
  const auto& left = *(it - 1);
  return (right.probability - left.probability) / (right.gain - left.gain);
}

Support QuantileTableDistribution::support() const {
  return {points_.front().gain, points_.back().gain};
}

bool QuantileTableDistribution::divergent_inverse_moment_at_zero() const {
  return points_.front().probability == 0.0 && points_.front().gain == 0.0;
}

double QuantileTableDistribution::mean() const {
  if (!covers_unit_interval()) {
    throw DomainError("quantile table: mean needs rows at probabilities 0 and 1");
  }
  return integrated_quantile(0.0, 1.0);
}

double QuantileTableDistribution::integrated_quantile(double p, double q) const {
  // Trapezoids are exact for the piecewise-linear quantile.
  const double gp = quantile(p);
  const double gq = quantile(q);
  double sum = 0.0;
  double u_prev = p;
  double g_prev = gp;
  for (const auto& pt : points_) {
    if (pt.probability <= p) continue;
    if (pt.probability >= q) break;
    sum += 0.5 * (pt.probability - u_prev) * (pt.gain + g_prev);
    u_prev = pt.probability;
    g_prev = pt.gain;
  }
  sum += 0.5 * (q - u_prev) * (gq + g_prev);
  return sum;
}

std::string QuantileTableDistribution::id() const { return id_; }

// ---------------------------------------------------------------------------
// Negation

NegatedDistribution::NegatedDistribution(Marginal base) : base_(std::move(base)) {}

double NegatedDistribution::cdf(double x) const { return 1.0 - base_.cdf(-x); }

double NegatedDistribution::quantile(double u) const { return -base_.law().upper_quantile(u); }

double NegatedDistribution::upper_quantile(double v) const { return -base_.law().quantile(v); }

double NegatedDistribution::density(double x) const { return base_.density(-x); }

Support NegatedDistribution::support() const {
  const Support s = base_.support();
  return {-s.hi, -s.lo};
}

DensityShape NegatedDistribution::shape() const {
  return base_.shape() == DensityShape::kDecreasing ? DensityShape::kIncreasing
                                                    : DensityShape::kDecreasing;
}

double NegatedDistribution::integrated_quantile(double p, double q) const {
  return -base_.law().integrated_quantile(1.0 - q, 1.0 - p);
}

std::optional<ExponentialForm> NegatedDistribution::exponential_form() const {
  auto form = base_.exponential_form();
  if (form) form->negated = !form->negated;
  return form;
}

std::string NegatedDistribution::id() const { return "neg(" + base_.id() + ")"; }

// ---------------------------------------------------------------------------
// Free functions

double integrated_quantile(const Marginal& m, double p, double q) {
  require_probability(p, "integrated_quantile");
  require_probability(q, "integrated_quantile");
  if (p > q) throw DomainError("integrated_quantile: p must not exceed q");
  if (p == q) return 0.0;
  return m.law().integrated_quantile(p, q);
}

double integrated_quantile_numeric(const Marginal& m, double p, double q) {
  require_probability(p, "integrated_quantile_numeric");
  require_probability(q, "integrated_quantile_numeric");
  if (p > q) throw DomainError("integrated_quantile_numeric: p must not exceed q");
  if (p == q) return 0.0;
  return m.law().Distribution::integrated_quantile(p, q);
}

double cond_expect_above(const Marginal& m, double a) {
  if (!(a >= 0.0 && a < 1.0)) throw DomainError("cond_expect_above: a must lie in [0, 1)");
  return integrated_quantile(m, a, 1.0) / (1.0 - a);
}

double cond_expect_below(const Marginal& m, double b) {
  if (!(b > 0.0 && b <= 1.0)) throw DomainError("cond_expect_below: b must lie in (0, 1]");
  return integrated_quantile(m, 0.0, b) / b;
}

Marginal negate(const Marginal& m) {
  if (const auto* neg = dynamic_cast<const NegatedDistribution*>(&m.law())) return neg->base();
  return Marginal(std::make_shared<NegatedDistribution>(m));
}

std::vector<QuantilePoint> parse_quantile_table(std::istream& in) {
  std::vector<QuantilePoint> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line) {
      if (ch == ',' || ch == '\t' || ch == ';') ch = ' ';
    }
    std::istringstream fields(line);
    double p = 0.0;
    double g = 0.0;
    if (!(fields >> p)) {
      if (line.find_first_not_of(" \r") == std::string::npos) continue;
      throw DomainError("quantile table: unreadable line " + std::to_string(line_no));
    }
    std::string rest;
    if (!(fields >> g) || (fields >> rest)) {
      throw DomainError("quantile table: expected two columns on line " + std::to_string(line_no));
    }
    points.push_back({p, g});
  }
  return points;
}

Marginal load_quantile_table(const std::filesystem::path& path, DensityShape claimed) {
  std::ifstream in(path);
  if (!in) throw DomainError("quantile table: cannot open " + path.string());
  return Marginal(std::make_shared<QuantileTableDistribution>(parse_quantile_table(in), claimed));
}

MonotonicityCheck check_monotonicity(const Marginal& m, int grid_points) {
  if (grid_points < 3) throw DomainError("check_monotonicity: need at least three grid points");
  const Support support = m.support();
  std::vector<double> densities;
  densities.reserve(static_cast<std::size_t>(grid_points));
  for (int k = 0; k < grid_points; ++k) {
    const double u = (k + 0.5) / grid_points;
    double x;
    try {
      x = m.quantile(u);
    } catch (const DomainError&) {
      continue;  // partial quantile tables
    }
    if (x < support.lo || x > support.hi) continue;
    densities.push_back(m.density(x));
  }
  double scale = 0.0;
  for (double d : densities) scale = std::max(scale, d);
  if (scale == 0.0) return {true, 0.0};
  const double sign = m.shape() == DensityShape::kDecreasing ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < densities.size(); ++k) {
    worst = std::max(worst, sign * (densities[k] - densities[k - 1]) / scale);
  }
  return {worst <= 1e-9, worst};
}

}  // namespace outage
