#pragma once

#include <functional>
#include <optional>
#include <span>

#include "outage/marginals.hpp"

// Zero-outage capacity with perfect CSI at the transmitter and a long-term
// power constraint: R = log2(1 + rho / E[1 / (X_1 + ... + X_n)]).
namespace outage {

struct CsitReport {
  double best;
  double worst;
  std::optional<double> iid;
  // Minimum over couplings of E[1/S].
  double min_inverse_sum_expectation;
  // Comonotonic (maximal) E[1/S]; empty when it diverges.
  std::optional<double> max_inverse_sum_expectation;
};

// min over couplings with marginal m of E[g(X_1 + ... + X_n)] for convex g,
// decreasing density on [0, inf):
//   n * int_0^c g(H_0(t)) dt + (1 - n c) * g(phi(0)),   c = c_n(0).
double min_expected_convex(const Marginal& m, int n, const std::function<double(double)>& g);

double zero_outage_csit_best(const Marginal& m, int n, double rho);

// Comonotonic E[1/S] = int_0^1 du / sum_i G_i(u); empty when divergent.
std::optional<double> comonotonic_inverse_sum_expectation(std::span<const Marginal> ms);

double zero_outage_csit_worst(const Marginal& m, int n, double rho);
double zero_outage_csit_worst(std::span<const Marginal> ms, double rho);

// log2(1 + rho (n - 1) / lambda); n >= 2.
double zero_outage_csit_iid_exponential(int n, double rho, double lambda);

CsitReport csit_report(const Marginal& m, int n, double rho);

}  // namespace outage
