#pragma once

// Command-line front end: simulate, sweep, factor and verify.
//
// Exit codes are a stable contract: 0 success, 1 gated verification (or
// factoring) failure, 2 configuration error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shorres/numtheory.hpp"

namespace shorres::cli {

enum ExitCode : int { kSuccess = 0, kGatedFailure = 1, kConfigError = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  u64 N = 15;
  std::optional<u64> x;
  std::optional<int> t;
  double epsilon = 0.25;
  u64 seed = 1;
  std::string format = "json";
  std::string out;  // empty: stdout
  bool fast = false;
  int max_attempts = 10;
  std::string measure = "l1p";
  std::string grid;  // LO:HI:STEP, empty selects the measure default
  double ledger_p = 1.0;
  double ledger_alpha = 2.0;
  double inject_perturbation = 0.0;  // verify self-test only
};

struct ResolvedConfig {
  RunConfig config;
  ShorInstance instance;
  bool within_square_window = false;
  std::vector<std::string> warnings;
};

/// Picks x (seeded, coprime) and t (from epsilon) when absent and validates
/// everything else. Throws ConfigError.
ResolvedConfig resolve(const RunConfig& config);

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::vector<double> points() const;
};

/// Parses "LO:HI:STEP". Throws ConfigError.
Grid parse_grid(const std::string& text);

struct SweepRow {
  double param = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
  double psi3 = 0.0;
  double delta = 0.0;  // psi3 - psi1
  bool limit = false;  // alpha routed to the alpha -> 1 limit
};

/// Measure values on the three simulated states at every grid point.
std::vector<SweepRow> sweep_rows(const ShorInstance& instance, const std::string& measure, const Grid& grid);

struct FactorAttempt {
  int attempt = 0;
  u64 k = 0;
  std::optional<u64> recovered_order;
  std::optional<std::pair<u64, u64>> factors;
};

enum class FactorStatus { Success, MethodInapplicable, AttemptsExhausted };

struct FactorOutcome {
  FactorStatus status = FactorStatus::AttemptsExhausted;
  std::vector<FactorAttempt> attempts;
  std::optional<std::pair<u64, u64>> factors;
};

/// Sample, recover the order, extract factors; stops on success, when a
/// verified exact order admits no factors, or after max_attempts.
FactorOutcome run_factoring(const ShorInstance& instance, u64 seed, int max_attempts, bool fast);

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_factor(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full argv dispatch; writes to out/err unless --out redirects the artifact.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17 significant digits, locale independent.
std::string format_real(double v);

}  // namespace shorres::cli
