#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "outage/capacity.hpp"
#include "outage/csit.hpp"
#include "outage/depbounds.hpp"
#include "outage/errors.hpp"
#include "outage/numerics.hpp"
#include "outage/oracle.hpp"

namespace outage::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  if (used != text.size()) throw UsageError(what + ": '" + text + "' is not a number");
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not an integer");
  }
  if (used != text.size()) throw UsageError(what + ": '" + text + "' is not an integer");
  return value;
}

struct ResolvedInput {
  std::vector<Marginal> marginals;
  bool heterogeneous;
};

ResolvedInput resolve_marginals(const Settings& s) {
  DensityShape shape;
  if (s.table_shape == "decreasing") {
    shape = DensityShape::kDecreasing;
  } else if (s.table_shape == "increasing") {
    shape = DensityShape::kIncreasing;
  } else {
    throw UsageError("--table-shape must be decreasing or increasing");
  }
  ResolvedInput input{parse_marginal_spec(s.marginal, s.normalize_sum, shape), false};
  if (input.marginals.size() > 1) {
    input.heterogeneous = true;
    const int count = static_cast<int>(input.marginals.size());
    if (!s.n.empty() && (s.n.size() != 1 || s.n.front() != count)) {
      throw UsageError("--n must equal the number of listed marginals (" + std::to_string(count) +
                       ")");
    }
  }
  return input;
}

std::vector<int> link_counts(const Settings& s, const ResolvedInput& input) {
  if (input.heterogeneous) return {static_cast<int>(input.marginals.size())};
  if (s.n.empty()) throw UsageError("--n is required");
  for (int n : s.n) {
    if (n < 1) throw UsageError("--n values must be at least 1");
  }
  return s.n;
}

void require_homogeneous_input(const ResolvedInput& input, const char* command) {
  if (input.heterogeneous) {
    throw UsageError(std::string(command) + " needs a single marginal shared by all links");
  }
}

void require_probabilities(const std::vector<double>& values, const char* flag, bool allow_zero) {
  if (values.empty()) throw UsageError(std::string(flag) + " is required");
  for (double v : values) {
    if (!(v < 1.0 && (allow_zero ? v >= 0.0 : v > 0.0))) {
      throw UsageError(std::string(flag) + " values must lie in " +
                       (allow_zero ? "[0, 1)" : "(0, 1)"));
    }
  }
}

Cell optional_cell(const std::optional<double>& value) {
  if (value) return *value;
  return std::monostate{};
}

Cell flag_cell(bool value) { return std::string(value ? "true" : "false"); }

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError("range must be START:STOP");
    const int lo = parse_int(parts[0], "range start");
    const int hi = parse_int(parts[1], "range stop");
    if (hi < lo) throw UsageError("range stop must not be below its start");
    for (int v = lo; v <= hi; ++v) values.push_back(v);
    return values;
  }
  for (const auto& part : split(text, ',')) values.push_back(parse_int(part, "integer list"));
  if (values.empty()) throw UsageError("empty integer list");
  return values;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_real(part, "number list"));
  if (values.empty()) throw UsageError("empty number list");
  return values;
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("grid must be START:STOP:COUNT");
  const double start = parse_real(parts[0], "grid start");
  const double stop = parse_real(parts[1], "grid stop");
  const int count = parse_int(parts[2], "grid count");
  if (count < 1) throw UsageError("grid count must be at least 1");
  if (count > 1 && !(stop > start)) throw UsageError("grid stop must exceed its start");
  std::vector<double> values;
  values.reserve(count);
  for (int k = 0; k < count; ++k) {
    values.push_back(count == 1 ? start
                                : k == count - 1 ? stop
                                                 : start + (stop - start) * k / (count - 1));
  }
  return values;
}

std::vector<Marginal> parse_marginal_spec(const std::string& spec, bool normalize_sum,
                                          DensityShape table_shape) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("marginal spec must be KIND:PARAMETERS");
  const std::string kind = spec.substr(0, colon);
  const std::string params = spec.substr(colon + 1);

  if (kind == "exp") {
    std::vector<double> rates = parse_real_list(params);
    for (double r : rates) {
      if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("exponential rates must be positive");
    }
    if (normalize_sum) {
      double inverse_sum = 0.0;
      for (double r : rates) inverse_sum += 1.0 / r;
      const double scale = inverse_sum / static_cast<double>(rates.size());
      for (double& r : rates) r *= scale;
    }
    std::vector<Marginal> ms;
    for (double r : rates) ms.push_back(Marginal::exponential(r));
    return ms;
  }
  if (normalize_sum) throw UsageError("--normalize-sum applies to exponential marginals only");
  if (kind == "uniform") {
    const auto bounds = parse_real_list(params);
    if (bounds.size() != 2) throw UsageError("uniform marginal needs uniform:LO,HI");
    try {
      return {Marginal::uniform(bounds[0], bounds[1])};
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  if (kind == "table") {
    try {
      return {load_quantile_table(params, table_shape)};
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot load quantile table: ") + e.what());
    }
  }
  throw UsageError("unknown marginal kind '" + kind + "' (expected exp, uniform or table)");
}

Settings apply_preset(Settings s) {
  if (s.preset.empty()) return s;
  if (s.preset == "fig1") {
    if (s.n.empty()) s.n = {3, 5, 10};
    if (s.a.empty()) s.a = parse_grid("0:0.99:100");
  } else if (s.preset == "fig2") {
    if (s.n.empty()) s.n = {5};
    if (!s.rho && !s.rho_db) s.rho_db = 5.0;
    if (s.eps.empty()) s.eps = parse_grid("0.001:0.999:999");
  } else if (s.preset == "fig3") {
    s.marginal = "exp:1";
    if (s.n.empty()) s.n = parse_int_list("2:10");
    if (!s.rho && !s.rho_db) s.rho_db = 5.0;
  } else {
    throw UsageError("unknown preset '" + s.preset + "' (expected fig1, fig2 or fig3)");
  }
  return s;
}

double linear_snr(const Settings& s) {
  double rho;
  if (s.rho_db) {
    rho = std::pow(10.0, *s.rho_db / 10.0);
  } else if (s.rho) {
    rho = *s.rho;
  } else {
    throw UsageError("--rho-db or --rho is required");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) throw UsageError("SNR must be positive and finite");
  return rho;
}

CommandResult cmd_bounds(const Settings& s) {
  const ResolvedInput input = resolve_marginals(s);
  const std::vector<int> ns = link_counts(s, input);
  const double rho = linear_snr(s);
  require_probabilities(s.eps, "--eps", true);

  CommandResult result;
  result.table.columns = {"n", "epsilon", "worst", "iid", "comonotonic", "best"};
  for (int n : ns) {
    for (double eps : s.eps) {
      const SystemConfig cfg{n, rho, eps};
      const BoundReport r = input.heterogeneous
                                ? bound_report(std::span<const Marginal>(input.marginals), cfg)
                                : bound_report(input.marginals.front(), cfg);
      result.table.add_row({std::int64_t{n}, eps, r.worst, optional_cell(r.iid), r.comonotonic,
                            r.best});
    }
  }
  return result;
}

CommandResult cmd_cmin(const Settings& s) {
  const ResolvedInput input = resolve_marginals(s);
  require_homogeneous_input(input, "cmin");
  const std::vector<int> ns = link_counts(s, input);
  const std::vector<double> as = s.a.empty() ? parse_grid("0:0.99:100") : s.a;
  require_probabilities(as, "--a-grid", true);

  CommandResult result;
  result.table.columns = {"n", "a", "cmin", "branch"};
  for (int n : ns) {
    for (double a : as) {
      const CminSolution sol = c_min(input.marginals.front(), n, a);
      result.table.add_row({std::int64_t{n}, a, sol.c, std::string(to_string(sol.branch))});
    }
  }
  return result;
}

CommandResult cmd_csit(const Settings& s) {
  const ResolvedInput input = resolve_marginals(s);
  require_homogeneous_input(input, "csit");
  const std::vector<int> ns = link_counts(s, input);
  const double rho = linear_snr(s);
  const Marginal& m = input.marginals.front();

  CommandResult result;
  result.table.columns = {"n", "csit_best", "csit_iid", "nocsit_best", "gap", "csit_worst"};
  for (int n : ns) {
    const CsitReport r = csit_report(m, n, rho);
    const double nocsit = zero_outage_best(m, rho, n);
    result.table.add_row(
        {std::int64_t{n}, r.best, optional_cell(r.iid), nocsit, r.best - nocsit, r.worst});
  }
  return result;
}

CommandResult cmd_verify(const Settings& s) {
  const ResolvedInput input = resolve_marginals(s);
  require_homogeneous_input(input, "verify");
  const std::vector<int> ns = link_counts(s, input);
  const std::vector<double> eps = s.eps.empty() ? std::vector<double>{0.01, 0.1} : s.eps;
  require_probabilities(eps, "--eps", false);
  if (s.oracle_n < 10) throw UsageError("--oracle-n must be at least 10");
  if (s.max_passes < 1) throw UsageError("--max-passes must be at least 1");
  if (s.samples < 1) throw UsageError("--samples must be at least 1");
  if (!(s.tolerance > 0.0)) throw UsageError("--tolerance must be positive");

  const Marginal& m = input.marginals.front();
  const auto form = m.exponential_form();
  constexpr double kSigmaLimit = 3.0;

  CommandResult result;
  result.table.columns = {"check", "n",     "epsilon", "reference", "estimate",
                          "error", "limit", "converged", "pass"};
  bool all_converged = true;
  bool all_pass = true;
  auto record = [&](const char* check, int n, double e, double reference, double estimate,
                    double error, double limit, bool converged) {
    const bool pass = converged && error <= limit;
    all_converged = all_converged && converged;
    all_pass = all_pass && pass;
    result.table.add_row({std::string(check), std::int64_t{n}, e, reference, estimate, error, limit,
                          flag_cell(converged), flag_cell(pass)});
  };

  for (int n : ns) {
    const std::vector<Marginal> ms(static_cast<std::size_t>(n), m);
    for (double e : eps) {
      RaOptions opt;
      opt.rows = static_cast<std::size_t>(s.oracle_n);
      opt.seed = s.seed;
      opt.max_passes = s.max_passes;

      // A single column has no coupling to optimise; what remains is the
      // offset of the extreme atom from the block edge, up to one quantile step.
      auto limit_for = [&](double reference, double edge, double step) {
        if (n > 1) return s.tolerance;
        const double slack = std::abs(m.quantile(edge + step) - m.quantile(edge));
        return std::max(s.tolerance, slack / std::abs(reference));
      };
      const double best = phi(m, n, e).value;
      const RaResult ra_best = ra_extremal_quantile(ms, e, RaMode::kMaxQuantile, opt);
      record("ra_best", n, e, best, ra_best.extremal_sum,
             std::abs(ra_best.extremal_sum - best) / std::abs(best),
             limit_for(best, e, (1.0 - e) / s.oracle_n),
             ra_best.converged);

      const double worst = -phi_minus(m, n, 1.0 - e).value;
      const RaResult ra_worst = ra_extremal_quantile(ms, e, RaMode::kMinQuantile, opt);
      record("ra_worst", n, e, worst, ra_worst.extremal_sum,
             std::abs(ra_worst.extremal_sum - worst) / std::abs(worst),
             limit_for(worst, e - e / s.oracle_n, e / s.oracle_n),
             ra_worst.converged);

      // Thresholds at which the outage probability is exactly e.
      if (form && !form->negated) {
        const double s_iid = inv_reg_lower_gamma(n, e) / form->rate;
        const McEstimate mc = mc_outage(ms, s_iid, Coupling::kIid, s.samples, s.seed);
        const double z = mc.standard_error > 0.0 ? std::abs(mc.value - e) / mc.standard_error
                                                 : (mc.value == e ? 0.0 : HUGE_VAL);
        record("mc_iid", n, e, e, mc.value, z, kSigmaLimit, true);
      }
      const double s_co = n * m.quantile(e);
      const McEstimate mc = mc_outage(ms, s_co, Coupling::kComonotonic, s.samples, s.seed + 1);
      const double z = mc.standard_error > 0.0 ? std::abs(mc.value - e) / mc.standard_error
                                               : (mc.value == e ? 0.0 : HUGE_VAL);
      record("mc_comonotonic", n, e, e, mc.value, z, kSigmaLimit, true);
    }
  }
  result.exit_code = !all_converged ? kExitNumeric : !all_pass ? kExitTolerance : kExitOk;
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Outage capacity bounds under dependent fading"};
  app.name("outage");
  app.set_config("--config", "", "Read flags from a key = value file (flags win)");
  app.fallthrough();
  app.require_subcommand(1);

  Settings s;
  std::string n_text, eps_text, eps_grid, a_grid;
  std::optional<double> rho_db, rho;

  app.add_option("--marginal", s.marginal, "exp:L[,L...] | uniform:LO,HI | table:PATH")
      ->capture_default_str()
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--table-shape", s.table_shape, "Density shape claimed for table marginals")
      ->check(CLI::IsMember({"decreasing", "increasing"}))
      ->capture_default_str();
  app.add_option("--n", n_text, "Link counts: N, N1,N2,... or START:STOP")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  auto* db = app.add_option("--rho-db", rho_db, "SNR in dB");
  auto* lin = app.add_option("--rho", rho, "SNR, linear");
  db->excludes(lin);
  auto* eps_opt = app.add_option("--eps", eps_text, "Outage probabilities: E or E1,E2,...")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  auto* grid_opt = app.add_option("--eps-grid", eps_grid, "START:STOP:COUNT");
  eps_opt->excludes(grid_opt);
  app.add_option("--a-grid", a_grid, "Tail masses for cmin: START:STOP:COUNT");
  app.add_flag("--normalize-sum", s.normalize_sum, "Rescale exponential rates so sum 1/L_i = n");
  app.add_option("--format", s.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", s.out, "Write output to PATH instead of stdout");
  app.add_option("--preset", s.preset, "Dataset preset: fig1 (cmin), fig2 (bounds), fig3 (csit)")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  app.add_option("--seed", s.seed, "Oracle seed")->capture_default_str();
  app.add_option("--oracle-n", s.oracle_n, "Rearrangement matrix rows")->capture_default_str();
  app.add_option("--max-passes", s.max_passes, "Rearrangement pass limit")->capture_default_str();
  app.add_option("--samples", s.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--tolerance", s.tolerance, "Relative tolerance for verify")
      ->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Epsilon-outage capacity bounds over epsilon");
  auto* cmin = app.add_subcommand("cmin", "c_n(a) over a grid of a");
  auto* csit = app.add_subcommand("csit", "Zero-outage capacities with transmitter CSI over n");
  auto* verify = app.add_subcommand("verify", "Cross-check against the rearrangement and MC oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CommandResult result;
  try {
    s.rho_db = rho_db;
    s.rho = rho;
    if (!n_text.empty()) s.n = parse_int_list(n_text);
    if (!eps_text.empty()) s.eps = parse_real_list(eps_text);
    if (!eps_grid.empty()) s.eps = parse_grid(eps_grid);
    if (!a_grid.empty()) s.a = parse_grid(a_grid);
    s = apply_preset(s);

    if (bounds->parsed()) {
      result = cmd_bounds(s);
    } else if (cmin->parsed()) {
      result = cmd_cmin(s);
    } else if (csit->parsed()) {
      result = cmd_csit(s);
    } else if (verify->parsed()) {
      result = cmd_verify(s);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedDistributionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }

  const std::string text = s.format == "json" ? to_json(result.table) : to_csv(result.table);
  if (s.out.empty()) {
    out << text;
  } else {
    std::ofstream file(s.out, std::ios::binary);
    if (!file || !(file << text)) {
      err << "error: cannot write " << s.out << "\n";
      return kExitUsage;
    }
  }
  if (result.exit_code == kExitNumeric) err << "verify: an oracle run did not converge\n";
  if (result.exit_code == kExitTolerance) err << "verify: tolerance exceeded\n";
  return result.exit_code;
}

}  // namespace outage::cli
