#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mup {

enum class ErrorCode {
  invalid_resolution,
  unsupported_manifold,
  invalid_input,
  invalid_field,
  zero_mass,
  invalid_parameter,
  normalization,
  degenerate_pair,
  degenerate_embedding,
  unsupported_component_count,
  configuration,
  budget_exceeded,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_resolution: return "invalid-resolution";
    case ErrorCode::unsupported_manifold: return "unsupported-manifold";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::invalid_field: return "invalid-field";
    case ErrorCode::zero_mass: return "zero-mass";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::normalization: return "normalization";
    case ErrorCode::degenerate_pair: return "degenerate-pair";
    case ErrorCode::degenerate_embedding: return "degenerate-embedding";
    case ErrorCode::unsupported_component_count: return "unsupported-component-count";
    case ErrorCode::configuration: return "configuration";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mup
