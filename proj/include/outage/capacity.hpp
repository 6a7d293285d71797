#pragma once

#include <optional>
#include <span>

#include "outage/marginals.hpp"

// epsilon-outage capacities without transmitter CSI. Rates are in bits per
// channel use; gains and SNR are linear.
namespace outage {

struct SystemConfig {
  int n = 1;
  double rho = 1.0;
  double epsilon = 0.0;

  // Throws DomainError unless n >= 1, rho > 0 and 0 <= epsilon < 1.
  void validate() const;
};

struct BoundReport {
  double worst;
  double best;
  std::optional<double> iid;
  double comonotonic;
  double phi_best;
  // phi_minus(1 - epsilon) (or Phi_minus for heterogeneous input); <= 0.
  double phi_worst;
  bool homogeneous;
};

// log2(1 + rho * phi(eps)) with phi of the homogeneous marginal.
double eps_capacity_best(const Marginal& m, const SystemConfig& cfg);
// log2(1 + rho * Phi(eps)); a list of identical marginals still uses Phi.
double eps_capacity_best(std::span<const Marginal> ms, const SystemConfig& cfg);

// log2(1 - rho * phi_minus(1 - eps)); exactly 0 at eps = 0.
double eps_capacity_worst(const Marginal& m, const SystemConfig& cfg);
double eps_capacity_worst(std::span<const Marginal> ms, const SystemConfig& cfg);

// log2(1 + rho * P^{-1}(n, eps) / lambda); exactly 0 at eps = 0.
double eps_capacity_iid_exponential(const SystemConfig& cfg, double lambda);

// log2(1 + rho * n * G(eps)); exactly 0 at eps = 0 when G(0) = 0.
double eps_capacity_comonotonic(const Marginal& m, const SystemConfig& cfg);
// log2(1 + rho * sum_i G_i(eps)); cfg.n is ignored.
double eps_capacity_comonotonic(std::span<const Marginal> ms, const SystemConfig& cfg);

double zero_outage_best(const Marginal& m, double rho, int n);
double zero_outage_best(std::span<const Marginal> ms, double rho);

// Homogeneous input (one marginal, n = cfg.n) uses phi / phi_minus.
BoundReport bound_report(const Marginal& m, const SystemConfig& cfg);
// A list of identical marginals is routed to the homogeneous bounds;
// otherwise Phi / Phi_minus. cfg.n must equal ms.size().
BoundReport bound_report(std::span<const Marginal> ms, const SystemConfig& cfg);

// log2(1 + rho * s) helper shared with the CSIT module.
double rate_from_gain(double rho, double gain);

}  // namespace outage
