#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace l1pred::validation {

enum class Tier { quick, full };

struct Check {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // absolute bound, or 3 combined standard errors
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0 = no runtime bound
  bool passed() const;
  std::string summary() const;  // one line
};

struct Options {
  Tier tier = Tier::full;
  std::uint64_t seed = 20240601;
};

inline constexpr int kCriterionCount = 11;

/// Runs one numbered criterion (1..11).
CriterionResult run_criterion(int id, const Options& options);

std::vector<CriterionResult> run_all(const Options& options,
                                     const std::function<void(const CriterionResult&)>& on_done = {});

/// Lists the headers pulled in by the oracle sources and flags any that
/// belong to the analytic risk path. Empty result means the sources were
/// not found.
std::vector<Check> audit_oracle_includes(const std::string& source_root);

}  // namespace l1pred::validation
