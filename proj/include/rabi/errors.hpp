#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rabi {

/// Failure categories surfaced by the numerical layers. The CLI maps every
/// kind except `validation` to exit status 2.
enum class ErrorKind {
  no_bracket,
  non_finite,
  convergence_failure,
  singular,
  degenerate_design,
  singular_eta,
  singular_denominator,
  asymmetric_params,
  validation,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::no_bracket: return "NoBracket";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::convergence_failure: return "ConvergenceFailure";
    case ErrorKind::singular: return "Singular";
    case ErrorKind::degenerate_design: return "DegenerateDesign";
    case ErrorKind::singular_eta: return "SingularEta";
    case ErrorKind::singular_denominator: return "SingularDenominator";
    case ErrorKind::asymmetric_params: return "AsymmetricParams";
    case ErrorKind::validation: return "Validation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rabi
