#include "outage/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "outage/errors.hpp"

namespace outage {

void Tolerance::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("tolerance: abs_tol must be positive");
  if (!(rel_tol > 0.0)) throw DomainError("tolerance: rel_tol must be positive");
  if (max_iterations < 1) throw DomainError("tolerance: max_iterations must be at least 1");
}

double find_root(const ScalarFunction& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (!(lo <= hi)) throw DomainError("find_root: lo must not exceed hi");
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) throw DomainError("find_root: NaN at bracket end");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw BracketError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  for (int it = 0; it < tol.max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= tol.abs_tol + tol.rel_tol * std::abs(mid) || mid <= lo || mid >= hi) {
      return mid;
    }
    const double f_mid = f(mid);
    if (std::isnan(f_mid)) throw DomainError("find_root: NaN inside bracket");
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("find_root: bracket did not shrink below tolerance in " +
                         std::to_string(tol.max_iterations) + " iterations");
}

namespace {

// 15-point Kronrod abscissae on [0, 1] of the half rule; odd indices are the
// embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const ScalarFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw DomainError("integrate: non-finite integrand at x = " + std::to_string(x));
  }
  return y;
}

Segment kronrod15(const ScalarFunction& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_center = checked(f, center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = checked(f, center - dx) + checked(f, center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

double integrate(const ScalarFunction& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (lo == hi) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, tol);
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("integrate: integration limits must be finite");
  }

  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, lo, hi);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);

  for (int it = 0;; ++it) {
    if (total_error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(total))) return total;
    if (it >= tol.max_iterations) break;
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // below machine resolution
    heap.pop();
    const Segment left = kronrod15(f, worst.lo, mid);
    const Segment right = kronrod15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // The running sums drift; recompute before the final verdict.
  total = 0.0;
  total_error = 0.0;
  for (auto copy = heap; !copy.empty(); copy.pop()) {
    total += copy.top().value;
    total_error += copy.top().error;
  }
  if (total_error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(total))) return total;
  throw ConvergenceError("integrate: error estimate " + std::to_string(total_error) +
                         " above tolerance after " + std::to_string(tol.max_iterations) +
                         " subdivisions");
}

double reg_lower_gamma(int n, double x) {
  if (n < 1) throw DomainError("reg_lower_gamma: shape must be a positive integer");
  if (!(x >= 0.0)) throw DomainError("reg_lower_gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;

  const double log_prefactor = -x + n * std::log(x) - std::lgamma(n + 1.0);
  if (x < n + 1.0) {
    // P = e^{-x} x^n / n! * sum_{j>=0} x^j / ((n+1)...(n+j)); no cancellation.
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 1000; ++j) {
      term *= x / (n + j);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::min(1.0, std::exp(log_prefactor) * sum);
  }
  // Q = e^{-x} sum_{k<n} x^k / k!, summed from the largest term downwards.
  double term = std::exp(log_prefactor) * n / x;  // k = n - 1
  double q = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    q += term;
    term *= k / x;
  }
  return std::max(0.0, 1.0 - q);
}

double inv_reg_lower_gamma(int n, double p) {
  if (n < 1) throw DomainError("inv_reg_lower_gamma: shape must be a positive integer");
  if (!(p >= 0.0) || p >= 1.0) throw DomainError("inv_reg_lower_gamma: p must lie in [0, 1)");
  if (p == 0.0) return 0.0;
  if (n == 1) return -std::log1p(-p);

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(n));
  while (reg_lower_gamma(n, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  const Tolerance tol{1e-300, 4e-16, 400};
  return find_root([n, p](double x) { return reg_lower_gamma(n, x) - p; }, lo, hi, tol);
}

}  // namespace outage
