#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/table.hpp"
#include "outage/marginals.hpp"

namespace outage::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumeric = 2,
  kExitTolerance = 3,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flag values after parsing; empty vectors and optionals mean "not given".
struct Settings {
  std::string marginal = "exp:1";
  std::string table_shape = "decreasing";
  bool normalize_sum = false;
  std::vector<int> n;
  std::optional<double> rho_db;
  std::optional<double> rho;
  std::vector<double> eps;
  std::vector<double> a;
  std::string format = "csv";
  std::string out;
  std::string preset;
  std::uint64_t seed = 1;
  int oracle_n = 2000;
  int max_passes = 100;
  long long samples = 100000;
  double tolerance = 0.02;
};

struct CommandResult {
  Table table;
  int exit_code = kExitOk;
};

// "3", "2,3,5" or "2:8" (inclusive range).
std::vector<int> parse_int_list(const std::string& text);
// "0.1" or "0.01,0.1".
std::vector<double> parse_real_list(const std::string& text);
// "START:STOP:COUNT", evenly spaced and inclusive of both ends.
std::vector<double> parse_grid(const std::string& text);

// exp:L | exp:L1,L2,... | uniform:LO,HI | table:PATH. Rates are rescaled so
// that sum 1/L_i = count when normalize_sum is set.
std::vector<Marginal> parse_marginal_spec(const std::string& spec, bool normalize_sum,
                                          DensityShape table_shape = DensityShape::kDecreasing);

// Fills parameters pinned by settings.preset where the caller left them unset.
Settings apply_preset(Settings settings);

double linear_snr(const Settings& settings);

CommandResult cmd_bounds(const Settings& settings);
CommandResult cmd_cmin(const Settings& settings);
CommandResult cmd_csit(const Settings& settings);
CommandResult cmd_verify(const Settings& settings);

// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace outage::cli
