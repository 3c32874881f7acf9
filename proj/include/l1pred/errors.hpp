#pragma once

#include <stdexcept>
#include <string>

namespace l1pred {

/// Malformed user input: model spec strings, grids, budgets.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation was called outside the region where its formula holds
/// (d < 2 for the angular reduction, non-unimodal q, |z| >= 1 for 2F1, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Quadrature or root finding did not reach its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace l1pred
