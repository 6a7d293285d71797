#include "outage/depbounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <limits>
#include <string>

#include "outage/errors.hpp"

namespace outage {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Probe point for the zero branch: the inequality is tested at c = 1e-12
// rather than at c = 0, where H_a is infinite for unbounded supports.
constexpr double kZeroProbe = 1e-12;

// Bracket tolerance for c_n(a).
const Tolerance kCminTolerance{1e-10, 1e-9, 200};

const Tolerance kHQuadrature{1e-13, 1e-12, 4000};

void require_links(int n) {
  if (n < 1) throw DomainError("number of links must be at least 1");
}

double sigma(const Marginal& m) { return m.shape() == DensityShape::kDecreasing ? 1.0 : -1.0; }

const NegatedDistribution* as_negated(const Marginal& m) {
  return dynamic_cast<const NegatedDistribution*>(&m.law());
}

// Integral of H_a over [c, (1-a)/n] through the integrated quantile. Both
// pieces of H_a telescope into a single quantile integral.
double h_integral_via_quantile(const Marginal& m, int n, double a, double c) {
  if (m.shape() == DensityShape::kDecreasing) {
    const double lo = std::min(a + (n - 1) * c, 1.0);
    const double hi = std::max(1.0 - c, lo);
    return integrated_quantile(m, lo, hi);
  }
  const double lo = std::min(a + c, 1.0);
  const double hi = std::max(1.0 - (n - 1) * c, lo);
  return integrated_quantile(m, lo, hi);
}

// Gap of the defining inequality, oriented so that gap >= 0 means satisfied.
class CminGap {
 public:
  CminGap(const Marginal& m, int n, double a, CminMethod method)
      : m_(m), n_(n), a_(a), b_((1.0 - a) / n), sigma_(sigma(m)), method_(method) {
    if (method == CminMethod::kAuto) exp_ = m.exponential_form();
  }

  double span() const { return b_; }

  // sigma * H_a, convex in x for either shape.
  double convex_h(double x) const { return sigma_ * h_a(m_, n_, a_, x); }

  double operator()(double c) const {
    if (exp_) return exponential_gap(c);
    const double integral = method_ == CminMethod::kQuadrature
                                ? integrate([this](double t) { return h_a(m_, n_, a_, t); }, c, b_,
                                            kHQuadrature)
                                : h_integral_via_quantile(m_, n_, a_, c);
    return sigma_ * (integral - (b_ - c) * h_a(m_, n_, a_, c));
  }

 private:
  // Closed forms of the inequality for Exp(rate) and its negation; the
  // threshold c does not depend on the rate, the gap scales with 1/rate.
  double exponential_gap(double c) const {
    const double n = n_;
    if (!exp_->negated) {
      const double w = std::max((1.0 - a_) - (n - 1.0) * c, 0.0);
      return (-b_ * std::log(w / c) + (1.0 - a_) - n * c) / exp_->rate;
    }
    const double q = (1.0 + (n - 1.0) * a_) / n;
    const double w = std::max(1.0 - (n - 1.0) * c, 0.0);
    return -(q * std::log(w / (a_ + c)) + a_ + n * c - 1.0) / exp_->rate;
  }

  const Marginal& m_;
  int n_;
  double a_;
  double b_;
  double sigma_;
  CminMethod method_;
  std::optional<ExponentialForm> exp_;
};

// Golden-section minimiser of a convex function on [lo, hi].
double golden_section_min(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

const char* to_string(CminBranch branch) {
  return branch == CminBranch::kZero ? "zero" : "positive";
}

const char* to_string(PhiBranch branch) {
  switch (branch) {
    case PhiBranch::kHAtCmin:
      return "H-at-cmin";
    case PhiBranch::kHAtZero:
      return "H-at-zero";
    case PhiBranch::kConditionalExpectation:
      return "conditional-expectation";
  }
  return "unknown";
}

double h_a(const Marginal& m, int n, double a, double x) {
  require_links(n);
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("h_a: a must lie in [0, 1]");
  const double b = (1.0 - a) / n;
  if (!(x >= 0.0 && x <= b * (1.0 + 4.0 * kEps))) {
    throw DomainError("h_a: x outside [0, (1 - a) / n]");
  }
  x = std::min(x, b);
  const double tail = 1.0 - a;

  if (m.shape() == DensityShape::kDecreasing) {
    // (n-1) G(a + (n-1) x) + G(1 - x), both written as upper quantiles.
    const double single = m.upper_quantile(x);
    if (n == 1) return single;
    const double v = std::max(tail - (n - 1) * x, 0.0);
    return (n - 1) * m.upper_quantile(v) + single;
  }

  // G(a + x) + (n-1) G(1 - (n-1) x). For -X this is
  // -(G_X(1 - a - x) + (n-1) G_X((n-1) x)).
  if (const auto* neg = as_negated(m)) {
    const Marginal& base = neg->base();
    const double first = base.quantile(std::max(tail - x, 0.0));
    if (n == 1) return -first;
    return -(first + (n - 1) * base.quantile(std::min((n - 1) * x, 1.0)));
  }
  const double first = m.quantile(std::min(a + x, 1.0));
  if (n == 1) return first;
  return first + (n - 1) * m.upper_quantile(std::min((n - 1) * x, 1.0));
}

CminSolution c_min(const Marginal& m, int n, double a, CminMethod method) {
  require_links(n);
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("c_min: a must lie in [0, 1]");
  const double b = (1.0 - a) / n;
  if (b <= kCminTolerance.abs_tol) return {0.0, CminBranch::kZero, 0.0};

  const CminGap gap(m, n, a, method);
  const double probe = std::min(kZeroProbe, 0.5 * b);
  const double x_min = golden_section_min([&gap](double x) { return gap.convex_h(x); }, probe, b);
  const double gap_peak = gap(std::max(x_min, probe));
  const double noise = 64.0 * kEps * (b * (std::abs(gap.convex_h(x_min)) + 1.0));

  const double gap_probe = gap(probe);
  if (gap_probe >= -noise) return {0.0, CminBranch::kZero, gap_probe};

  // gap rises while sigma*H_a decreases and falls back to 0 at c = b, so it
  // is positive on (c_n(a), b) whenever it is positive anywhere.
  if (!(gap_peak > noise) || x_min <= probe) return {b, CminBranch::kPositive, 0.0};

  const double c = find_root(gap, probe, x_min, kCminTolerance);
  return {c, CminBranch::kPositive, gap(c)};
}

PhiValue phi(const Marginal& m, int n, double a, CminMethod method) {
  require_links(n);
  if (!(a >= 0.0 && a < 1.0)) throw DomainError("phi: a must lie in [0, 1)");
  const CminSolution sol = c_min(m, n, a, method);
  if (sol.branch == CminBranch::kZero) {
    return {n * cond_expect_above(m, a), sol, PhiBranch::kConditionalExpectation};
  }
  if (m.shape() == DensityShape::kDecreasing) {
    return {h_a(m, n, a, sol.c), sol, PhiBranch::kHAtCmin};
  }
  const double value = h_a(m, n, a, 0.0);
  if (!std::isfinite(value)) throw DivergenceError("phi: H_a(0) is infinite");
  return {value, sol, PhiBranch::kHAtZero};
}

PhiValue phi_minus(const Marginal& m, int n, double a, CminMethod method) {
  require_links(n);
  if (m.shape() != DensityShape::kDecreasing) {
    throw UnsupportedDistributionError("phi_minus: marginal must have a decreasing density");
  }
  if (m.support().lo != 0.0) {
    throw UnsupportedDistributionError("phi_minus: marginal must satisfy G(0) = 0");
  }
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("phi_minus: a must lie in (0, 1]");
  if (a == 0.0 && std::isinf(m.support().hi)) {
    throw DivergenceError("phi_minus: G(1) is infinite at a = 0");
  }
  if (a == 1.0) return {0.0, {0.0, CminBranch::kZero, 0.0}, PhiBranch::kConditionalExpectation};
  return phi(negate(m), n, a, method);
}

const Marginal& require_homogeneous(std::span<const Marginal> ms) {
  if (ms.empty()) throw DomainError("marginal list is empty");
  const std::string id = ms.front().id();
  for (const auto& m : ms) {
    if (m.id() != id) {
      throw UnsupportedDistributionError(
          "homogeneous bound requires identical marginals; use the Phi bounds instead");
    }
  }
  return ms.front();
}

double big_phi(std::span<const Marginal> ms, double a) {
  if (ms.empty()) throw DomainError("big_phi: marginal list is empty");
  if (!(a >= 0.0 && a < 1.0)) throw DomainError("big_phi: a must lie in [0, 1)");
  double sum = 0.0;
  for (const auto& m : ms) sum += cond_expect_above(m, a);
  return sum;
}

double big_phi_minus(std::span<const Marginal> ms, double a) {
  if (ms.empty()) throw DomainError("big_phi_minus: marginal list is empty");
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("big_phi_minus: a must lie in (0, 1]");
  double sum = 0.0;
  for (const auto& m : ms) {
    // E[X | X < G(b)] -> G(0) as b -> 0.
    sum += a == 1.0 ? m.quantile(0.0) : cond_expect_below(m, 1.0 - a);
  }
  return -sum;
}

double worst_case_tail(const Marginal& m, int n, double s) {
  if (!(s >= 0.0)) throw DomainError("worst_case_tail: s must be nonnegative");
  if (s <= phi(m, n, 0.0).value) return 0.0;

  double hi = 0.5;
  for (int k = 1; phi(m, n, hi).value < s; ++k) {
    if (k >= 50) return 1.0;  // bounded support: s beyond every quantile
    hi = 1.0 - std::ldexp(1.0, -(k + 1));
  }
  const Tolerance tol{1e-13, 1e-12, 200};
  return find_root([&](double a) { return phi(m, n, a).value - s; }, 0.0, hi, tol);
}

double min_a_with_zero_cmin_minus(const Marginal& m, int n) {
  require_links(n);
  if (m.shape() != DensityShape::kDecreasing) {
    throw UnsupportedDistributionError("threshold search expects a decreasing-density marginal");
  }
  const Marginal neg = negate(m);
  auto probe_gap = [&](double a) {
    const CminGap gap(neg, n, a, CminMethod::kAuto);
    return gap(std::min(kZeroProbe, 0.5 * gap.span()));
  };

  double lo = 1e-15;
  if (probe_gap(lo) >= 0.0) return lo;
  double hi = 0.5;
  for (double candidate : {0.5, 0.9, 0.99, 0.999}) {
    hi = candidate;
    if (probe_gap(hi) >= 0.0) break;
  }
  if (probe_gap(hi) < 0.0) throw ConvergenceError("threshold search: no zero branch below 0.999");
  const Tolerance tol{1e-14, 1e-10, 400};
  return find_root(probe_gap, lo, hi, tol);
}

}  // namespace outage
