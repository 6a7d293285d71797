#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace outage {

enum class DensityShape { kDecreasing, kIncreasing };

const char* to_string(DensityShape shape);

// Closed interval of the real line; endpoints may be infinite.
struct Support {
  double lo;
  double hi;
};

// Parameters of an exponential law (or of its negation), exposed so callers
// can take closed-form fast paths.
struct ExponentialForm {
  double rate;
  bool negated;
};

// A univariate channel-gain law, defined primarily through its quantile
// function G. Implementations are immutable.
class Distribution {
 public:
  virtual ~Distribution() = default;

  virtual double cdf(double x) const = 0;
  // G(u) for u in [0, 1]; G(1) may be +inf.
  virtual double quantile(double u) const = 0;
  // G(1 - v). Overridden where the complement can be evaluated without
  // cancellation (exponential: -log(v) / rate).
  virtual double upper_quantile(double v) const { return quantile(1.0 - v); }
  virtual double density(double x) const = 0;
  virtual Support support() const = 0;
  virtual DensityShape shape() const = 0;
  // True when the density is strictly positive at gain 0, i.e. G(u) ~ u / f(0)
  // and the integral of 1 / G over (0, 1) diverges.
  virtual bool divergent_inverse_moment_at_zero() const = 0;
  virtual double mean() const;
  // Integral of G over [p, q]. Arguments are validated by the free function
  // integrated_quantile(); the default is adaptive quadrature.
  virtual double integrated_quantile(double p, double q) const;
  virtual std::optional<ExponentialForm> exponential_form() const { return std::nullopt; }
  // Stable identity string; two marginals with the same id are the same law.
  virtual std::string id() const = 0;
};

// Shared, immutable handle to a Distribution.
class Marginal {
 public:
  explicit Marginal(std::shared_ptr<const Distribution> law);

  static Marginal exponential(double rate);
  static Marginal uniform(double lo, double hi);

  double cdf(double x) const { return law_->cdf(x); }
  double quantile(double u) const;
  double upper_quantile(double v) const;
  double density(double x) const { return law_->density(x); }
  Support support() const { return law_->support(); }
  DensityShape shape() const { return law_->shape(); }
  bool divergent_inverse_moment_at_zero() const { return law_->divergent_inverse_moment_at_zero(); }
  double mean() const { return law_->mean(); }
  std::optional<ExponentialForm> exponential_form() const { return law_->exponential_form(); }
  std::string id() const { return law_->id(); }

  const Distribution& law() const { return *law_; }
  const std::shared_ptr<const Distribution>& shared_law() const { return law_; }

  friend bool operator==(const Marginal& a, const Marginal& b) { return a.id() == b.id(); }

 private:
  std::shared_ptr<const Distribution> law_;
};

class ExponentialDistribution final : public Distribution {
 public:
  explicit ExponentialDistribution(double rate);

  double rate() const { return rate_; }

  double cdf(double x) const override;
  double quantile(double u) const override;
  double upper_quantile(double v) const override;
  double density(double x) const override;
  Support support() const override;
  DensityShape shape() const override { return DensityShape::kDecreasing; }
  bool divergent_inverse_moment_at_zero() const override { return true; }
  double mean() const override { return 1.0 / rate_; }
  double integrated_quantile(double p, double q) const override;
  std::optional<ExponentialForm> exponential_form() const override {
    return ExponentialForm{rate_, false};
  }
  std::string id() const override;

 private:
  double rate_;
};

// Uniform on [lo, hi]. The constant density is tagged decreasing.
class UniformDistribution final : public Distribution {
 public:
  UniformDistribution(double lo, double hi);

  double cdf(double x) const override;
  double quantile(double u) const override;
  double upper_quantile(double v) const override;
  double density(double x) const override;
  Support support() const override { return {lo_, hi_}; }
  DensityShape shape() const override { return DensityShape::kDecreasing; }
  bool divergent_inverse_moment_at_zero() const override { return lo_ == 0.0; }
  double mean() const override { return 0.5 * (lo_ + hi_); }
  double integrated_quantile(double p, double q) const override;
  std::string id() const override;

 private:
  double lo_;
  double hi_;
};

struct QuantilePoint {
  double probability;
  double gain;
};

// Empirical marginal: linear interpolation between (probability, gain)
// samples. Queries outside the tabulated probability range are refused. The
// density shape is the user's claim; see check_monotonicity().
class QuantileTableDistribution final : public Distribution {
 public:
  QuantileTableDistribution(std::vector<QuantilePoint> points, DensityShape claimed);

  const std::vector<QuantilePoint>& points() const { return points_; }
  bool covers_unit_interval() const;

  double cdf(double x) const override;
  double quantile(double u) const override;
  double density(double x) const override;
  Support support() const override;
  DensityShape shape() const override { return shape_; }
  bool divergent_inverse_moment_at_zero() const override;
  double mean() const override;
  double integrated_quantile(double p, double q) const override;
  std::string id() const override;

 private:
  std::vector<QuantilePoint> points_;
  DensityShape shape_;
  std::string id_;
};

// Law of -X for a base law X: F(x) = 1 - F_X(-x), G(u) = -G_X(1 - u).
class NegatedDistribution final : public Distribution {
 public:
  explicit NegatedDistribution(Marginal base);

  const Marginal& base() const { return base_; }

  double cdf(double x) const override;
  double quantile(double u) const override;
  double upper_quantile(double v) const override;
  double density(double x) const override;
  Support support() const override;
  DensityShape shape() const override;
  bool divergent_inverse_moment_at_zero() const override { return false; }
  double mean() const override { return -base_.mean(); }
  double integrated_quantile(double p, double q) const override;
  std::optional<ExponentialForm> exponential_form() const override;
  std::string id() const override;

 private:
  Marginal base_;
};

// Integral of G over [p, q], 0 <= p <= q <= 1.
double integrated_quantile(const Marginal& m, double p, double q);

// Same integral computed by quadrature of G regardless of any closed form.
double integrated_quantile_numeric(const Marginal& m, double p, double q);

// E[X | X >= G(a)] for a in [0, 1).
double cond_expect_above(const Marginal& m, double a);

// E[X | X < G(b)] for b in (0, 1].
double cond_expect_below(const Marginal& m, double b);

// Law of -X. negate(negate(m)) returns m itself.
Marginal negate(const Marginal& m);

// Two-column text: probability, gain. Blank lines and '#' comments are
// skipped. Ordering is checked when the table distribution is built.
std::vector<QuantilePoint> parse_quantile_table(std::istream& in);
Marginal load_quantile_table(const std::filesystem::path& path,
                             DensityShape claimed = DensityShape::kDecreasing);

struct MonotonicityCheck {
  bool consistent;
  // Largest density increase (for a decreasing claim) or decrease (for an
  // increasing claim) between neighbouring grid points, relative to the
  // density scale.
  double worst_violation;
};

// Samples the density at the gains G(u_k) on a uniform probability grid and
// compares successive differences with the shape tag.
MonotonicityCheck check_monotonicity(const Marginal& m, int grid_points = 256);

}  // namespace outage
