#pragma once

#include <stdexcept>
#include <string>

namespace polyharm {

enum class ErrorKind { config, capability, chart, contract, degenerate, precondition };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad configuration: unknown model kind, grid too coarse, malformed expression.
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

// The model cannot supply what was asked (jet order, curvature derivatives, wrong target).
struct CapabilityError : Error {
  explicit CapabilityError(const std::string& w) : Error(ErrorKind::capability, w) {}
};

// A point left the chart of a model.
struct ChartError : Error {
  explicit ChartError(const std::string& w) : Error(ErrorKind::chart, w) {}
};

// A numerical self-check failed (cross-check tolerance, non-monotone flow, dt underflow).
struct ContractError : Error {
  explicit ContractError(const std::string& w) : Error(ErrorKind::contract, w) {}
};

// Inputs for which the requested quantity is undefined (empty ratio mask, identical maps).
struct DegenerateError : Error {
  explicit DegenerateError(const std::string& w) : Error(ErrorKind::degenerate, w) {}
};

// Declared assumptions do not hold (window not equatorial).
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};

const char* to_string(ErrorKind k) noexcept;

}  // namespace polyharm
