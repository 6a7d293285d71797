#pragma once

#include <functional>

namespace outage {

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_iterations = 200;

  // Throws DomainError when a field violates its bound.
  void validate() const;
};

using ScalarFunction = std::function<double(double)>;

// Bisection on [lo, hi]. Requires f(lo) * f(hi) <= 0; stops when f hits zero
// exactly or the bracket shrinks below abs_tol + rel_tol * |x|. The returned
// point always lies inside a sign-changing bracket.
double find_root(const ScalarFunction& f, double lo, double hi, const Tolerance& tol = {});

// Adaptive 7/15-point Gauss-Kronrod quadrature with global subdivision.
//
// Endpoints are never evaluated, so integrable endpoint singularities (log,
// inverse square root, infinite quantiles at u -> 1) are resolved by repeatedly
// halving the endpoint-adjacent subinterval; that shrinking margin carries its
// own Kronrod estimate and error. Subdivision stops once the summed error
// estimate is below max(abs_tol, rel_tol * |I|). tol.max_iterations bounds the
// number of bisections.
//
// Throws DomainError for a non-finite value at an interior node and
// ConvergenceError if the tolerance is not met.
double integrate(const ScalarFunction& f, double lo, double hi, const Tolerance& tol = {});

// Regularized lower incomplete gamma P(n, x) for integer shape n >= 1.
double reg_lower_gamma(int n, double x);

// Inverse in x of P(n, x) = p, for p in [0, 1).
double inv_reg_lower_gamma(int n, double p);

}  // namespace outage
