#include "outage/csit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "outage/capacity.hpp"
#include "outage/depbounds.hpp"
#include "outage/errors.hpp"
#include "outage/numerics.hpp"

namespace outage {
namespace {

const Tolerance kCsitQuadrature{1e-12, 1e-11, 4000};

}  // namespace

double min_expected_convex(const Marginal& m, int n, const std::function<double(double)>& g) {
  if (m.shape() != DensityShape::kDecreasing) {
    throw UnsupportedDistributionError("min_expected_convex: density must be decreasing");
  }
  // Outside the tails the extremal coupling is a complete mix whose constant
  // sum is phi(0): H_0(c) when c > 0 and n E[X] when c = 0.
  const PhiValue mix = phi(m, n, 0.0);
  const double c = mix.c_used.branch == CminBranch::kZero ? 0.0 : mix.c_used.c;
  const double middle = std::max(1.0 - n * c, 0.0);
  const double g_mix = middle > 0.0 ? g(mix.value) : 0.0;
  if (c == 0.0) return g_mix;
  // n int_{1-c}^1 g(H_0(1-x)) dx, with t = 1 - x.
  const double tails =
      integrate([&](double t) { return g(h_a(m, n, 0.0, t)); }, 0.0, c, kCsitQuadrature);
  return n * tails + middle * g_mix;
}

double zero_outage_csit_best(const Marginal& m, int n, double rho) {
  if (!(rho > 0.0)) throw DomainError("csit: rho must be positive");
  if (n == 1) return zero_outage_csit_worst(m, 1, rho);
  const double inverse_sum = min_expected_convex(m, n, [](double s) { return 1.0 / s; });
  return rate_from_gain(rho, 1.0 / inverse_sum);
}

std::optional<double> comonotonic_inverse_sum_expectation(std::span<const Marginal> ms) {
  if (ms.empty()) throw DomainError("comonotonic E[1/S]: marginal list is empty");
  bool divergent = true;
  for (const auto& m : ms) divergent = divergent && m.divergent_inverse_moment_at_zero();
  if (divergent) return std::nullopt;
  auto integrand = [ms](double u) {
    double sum = 0.0;
    for (const auto& m : ms) sum += m.law().quantile(u);
    return 1.0 / sum;
  };
  return integrate(integrand, 0.0, 1.0, kCsitQuadrature);
}

double zero_outage_csit_worst(std::span<const Marginal> ms, double rho) {
  if (!(rho > 0.0)) throw DomainError("csit: rho must be positive");
  for (const auto& m : ms) {
    if (m.shape() != DensityShape::kDecreasing) {
      throw UnsupportedDistributionError("csit worst case: densities must be decreasing");
    }
  }
  const auto inverse_sum = comonotonic_inverse_sum_expectation(ms);
  if (!inverse_sum) return 0.0;
  return rate_from_gain(rho, 1.0 / *inverse_sum);
}

double zero_outage_csit_worst(const Marginal& m, int n, double rho) {
  if (n < 1) throw DomainError("csit: n must be at least 1");
  const std::vector<Marginal> ms(static_cast<std::size_t>(n), m);
  return zero_outage_csit_worst(ms, rho);
}

double zero_outage_csit_iid_exponential(int n, double rho, double lambda) {
  if (n < 2) throw DomainError("csit iid: E[1/S] is infinite for fewer than two links");
  if (!(rho > 0.0)) throw DomainError("csit: rho must be positive");
  if (!(lambda > 0.0)) throw DomainError("csit iid: lambda must be positive");
  return rate_from_gain(rho, (n - 1) / lambda);
}

CsitReport csit_report(const Marginal& m, int n, double rho) {
  CsitReport report{};
  report.best = zero_outage_csit_best(m, n, rho);
  report.worst = zero_outage_csit_worst(m, n, rho);
  if (auto form = m.exponential_form(); form && !form->negated && n >= 2) {
    report.iid = zero_outage_csit_iid_exponential(n, rho, form->rate);
  }
  if (n >= 2) {
    report.min_inverse_sum_expectation =
        min_expected_convex(m, n, [](double s) { return 1.0 / s; });
  } else {
    const std::vector<Marginal> one{m};
    const auto e = comonotonic_inverse_sum_expectation(one);
    report.min_inverse_sum_expectation =
        e ? *e : std::numeric_limits<double>::infinity();
  }
  const std::vector<Marginal> ms(static_cast<std::size_t>(n), m);
  report.max_inverse_sum_expectation = comonotonic_inverse_sum_expectation(ms);
  return report;
}

}  // namespace outage
