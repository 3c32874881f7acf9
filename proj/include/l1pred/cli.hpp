#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l1pred/risk_engine.hpp"

namespace l1pred::cli {

enum ExitCode : int { ok = 0, config_error = 2, numerical_failure = 3, validation_failure = 4 };

/// An inclusive grid written as lo:hi:step.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::string text;

  std::vector<double> points() const;
};

/// Throws ConfigError naming `flag` and the offending token.
Grid parse_grid(std::string_view text, std::string_view flag);

struct RunConfig {
  std::string command;
  std::string p;
  std::string q;  // empty: same as p (risk curves) or the uniform ball (uniform)
  std::string gamma = "identity";
  std::optional<Grid> c_grid;
  std::optional<Grid> lambda_grid;
  double m = 1.0;
  std::string estimator;
  std::optional<double> c1;
  QuadSpec quad;
  McSpec mc;
  std::string out;

  std::vector<int> dims;

  std::vector<double> values;
  std::string values_file;
  double A = 0.0;
  double B = 0.0;

  std::string tier = "quick";
  std::vector<int> criteria;
};

void cmd_risk_curve(const RunConfig& config, std::ostream& out);
void cmd_restricted_curve(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_uniform(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_bayes_uniform(const RunConfig& config, std::ostream& out);
/// Returns true when every criterion passes.
bool cmd_validate(const RunConfig& config, std::ostream& out);

/// Parses argv, runs the subcommand and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace l1pred::cli
