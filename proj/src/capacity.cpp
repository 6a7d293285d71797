#include "outage/capacity.hpp"

#include <cmath>
#include <numbers>

#include "outage/depbounds.hpp"
#include "outage/errors.hpp"
#include "outage/numerics.hpp"

namespace outage {

void SystemConfig::validate() const {
  if (n < 1) throw DomainError("system config: n must be at least 1");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("system config: rho must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw DomainError("system config: epsilon must lie in [0, 1)");
  }
}

double rate_from_gain(double rho, double gain) {
  return std::log1p(rho * gain) / std::numbers::ln2;
}

double eps_capacity_best(const Marginal& m, const SystemConfig& cfg) {
  cfg.validate();
  return rate_from_gain(cfg.rho, phi(m, cfg.n, cfg.epsilon).value);
}

double eps_capacity_best(std::span<const Marginal> ms, const SystemConfig& cfg) {
  cfg.validate();
  return rate_from_gain(cfg.rho, big_phi(ms, cfg.epsilon));
}

double eps_capacity_worst(const Marginal& m, const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.epsilon == 0.0) return 0.0;
  return rate_from_gain(cfg.rho, -phi_minus(m, cfg.n, 1.0 - cfg.epsilon).value);
}

double eps_capacity_worst(std::span<const Marginal> ms, const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.epsilon == 0.0) return 0.0;
  return rate_from_gain(cfg.rho, -big_phi_minus(ms, 1.0 - cfg.epsilon));
}

double eps_capacity_iid_exponential(const SystemConfig& cfg, double lambda) {
  cfg.validate();
  if (!(lambda > 0.0)) throw DomainError("iid capacity: lambda must be positive");
  if (cfg.epsilon == 0.0) return 0.0;
  return rate_from_gain(cfg.rho, inv_reg_lower_gamma(cfg.n, cfg.epsilon) / lambda);
}

double eps_capacity_comonotonic(const Marginal& m, const SystemConfig& cfg) {
  cfg.validate();
  return rate_from_gain(cfg.rho, cfg.n * m.quantile(cfg.epsilon));
}

double eps_capacity_comonotonic(std::span<const Marginal> ms, const SystemConfig& cfg) {
  cfg.validate();
  if (ms.empty()) throw DomainError("comonotonic capacity: marginal list is empty");
  double sum = 0.0;
  for (const auto& m : ms) sum += m.quantile(cfg.epsilon);
  return rate_from_gain(cfg.rho, sum);
}

double zero_outage_best(const Marginal& m, double rho, int n) {
  return eps_capacity_best(m, SystemConfig{n, rho, 0.0});
}

double zero_outage_best(std::span<const Marginal> ms, double rho) {
  return eps_capacity_best(ms, SystemConfig{static_cast<int>(ms.size()), rho, 0.0});
}

BoundReport bound_report(const Marginal& m, const SystemConfig& cfg) {
  cfg.validate();
  BoundReport report{};
  report.homogeneous = true;
  report.phi_best = phi(m, cfg.n, cfg.epsilon).value;
  report.best = rate_from_gain(cfg.rho, report.phi_best);
  report.phi_worst = cfg.epsilon == 0.0 ? 0.0 : phi_minus(m, cfg.n, 1.0 - cfg.epsilon).value;
  report.worst = cfg.epsilon == 0.0 ? 0.0 : rate_from_gain(cfg.rho, -report.phi_worst);
  report.comonotonic = eps_capacity_comonotonic(m, cfg);
  if (auto form = m.exponential_form(); form && !form->negated) {
    report.iid = eps_capacity_iid_exponential(cfg, form->rate);
  }
  return report;
}

BoundReport bound_report(std::span<const Marginal> ms, const SystemConfig& cfg) {
  cfg.validate();
  if (ms.empty()) throw DomainError("bound report: marginal list is empty");
  if (static_cast<std::size_t>(cfg.n) != ms.size()) {
    throw DomainError("bound report: n must equal the number of marginals");
  }
  bool identical = true;
  for (const auto& m : ms) identical = identical && m == ms.front();
  if (identical) return bound_report(ms.front(), cfg);

  BoundReport report{};
  report.homogeneous = false;
  report.phi_best = big_phi(ms, cfg.epsilon);
  report.best = rate_from_gain(cfg.rho, report.phi_best);
  report.phi_worst = cfg.epsilon == 0.0 ? 0.0 : big_phi_minus(ms, 1.0 - cfg.epsilon);
  report.worst = cfg.epsilon == 0.0 ? 0.0 : rate_from_gain(cfg.rho, -report.phi_worst);
  report.comonotonic = eps_capacity_comonotonic(ms, cfg);
  return report;
}

}  // namespace outage
