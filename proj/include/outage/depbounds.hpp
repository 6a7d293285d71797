#pragma once

#include <span>

#include "outage/marginals.hpp"
#include "outage/numerics.hpp"

// Dependence-uncertainty bounds for a sum of n gains with fixed marginals.
//
// For a homogeneous marginal with monotone density the infimum over all
// couplings of P(X_1 + ... + X_n < s) is phi^{-1}(s). phi is built from
//
//   decreasing density:  H_a(x) = (n-1) G(a + (n-1) x) + G(1 - x)
//   increasing density:  H_a(x) = G(a + x) + (n-1) G(1 - (n-1) x)
//
// on x in [0, (1-a)/n], and from the smallest c in that interval for which
//
//   int_c^{(1-a)/n} H_a(t) dt  >=  ((1-a)/n - c) H_a(c)     (decreasing)
//   int_c^{(1-a)/n} H_a(t) dt  <=  ((1-a)/n - c) H_a(c)     (increasing).
//
// phi_minus is phi of the negated gain, which turns the infimum into the
// supremum of P(S < s). Heterogeneous marginals only admit the looser
// conditional-expectation bounds big_phi / big_phi_minus.
namespace outage {

enum class CminBranch { kZero, kPositive };

const char* to_string(CminBranch branch);

struct CminSolution {
  double c;
  CminBranch branch;
  // Signed gap of the defining inequality at c (positive = satisfied), in the
  // orientation of the density shape.
  double residual;
};

enum class PhiBranch { kHAtCmin, kHAtZero, kConditionalExpectation };

const char* to_string(PhiBranch branch);

struct PhiValue {
  double value;
  CminSolution c_used;
  PhiBranch formula_branch;
};

// How c_min evaluates the integral of H_a.
enum class CminMethod {
  // Exponential closed-form inequality when available, otherwise the
  // marginal's integrated quantile.
  kAuto,
  // Adaptive quadrature of H_a itself.
  kQuadrature,
};

double h_a(const Marginal& m, int n, double a, double x);

CminSolution c_min(const Marginal& m, int n, double a, CminMethod method = CminMethod::kAuto);

PhiValue phi(const Marginal& m, int n, double a, CminMethod method = CminMethod::kAuto);

// phi of -X for a decreasing-density marginal with G(0) = 0, a in (0, 1].
PhiValue phi_minus(const Marginal& m, int n, double a, CminMethod method = CminMethod::kAuto);

// Sum of E[X_i | X_i >= G_i(a)], a in [0, 1).
double big_phi(std::span<const Marginal> ms, double a);

// -Sum of E[X_i | X_i < G_i(1 - a)], a in (0, 1].
double big_phi_minus(std::span<const Marginal> ms, double a);

// inf over couplings of P(X_1 + ... + X_n < s) = phi^{-1}(s).
double worst_case_tail(const Marginal& m, int n, double s);

// Smallest a in (0, 1) for which c_min of -X is zero (phi_minus switches to
// the conditional-expectation branch from there on).
double min_a_with_zero_cmin_minus(const Marginal& m, int n);

// Throws UnsupportedDistributionError unless every marginal has the same id.
const Marginal& require_homogeneous(std::span<const Marginal> ms);

}  // namespace outage
