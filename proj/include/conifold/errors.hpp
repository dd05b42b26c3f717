#pragma once

#include <stdexcept>
#include <string>

namespace conifold {

// Failure taxonomy shared by the library and the CLI.  Each kind maps to a
// distinct process exit code (see exit_code_for).
enum class ErrorKind {
  InvalidInput,           // malformed argument, config, or file
  InconsistentTopology,   // Betti-number inputs violate an exactness bound
  CutoffInsufficient,     // spectrum does not cover the requested window
  ExceptionalRate,        // a rate vector hits an exceptional weight
  InternalInconsistency,  // a cross-check identity failed
  StabilityViolation,     // stable branch requested on a non-stable scenario
  Convergence,            // mesh eigensolver failed to converge in budget
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InconsistentTopology: return "inconsistent-topology";
    case ErrorKind::CutoffInsufficient: return "cutoff-insufficient";
    case ErrorKind::ExceptionalRate: return "exceptional-rate";
    case ErrorKind::InternalInconsistency: return "internal-inconsistency";
    case ErrorKind::StabilityViolation: return "stability-violation";
    case ErrorKind::Convergence: return "convergence";
  }
  return "unknown";
}

// CLI contract: 0 success, 2 invalid config, 3 inconsistent topology,
// 4 spectrum cutoff insufficient (or not computable), 5 exceptional rate,
// 6 internal cross-check failure, 7 stability violation.
inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return 2;
    case ErrorKind::InconsistentTopology: return 3;
    case ErrorKind::CutoffInsufficient: return 4;
    case ErrorKind::ExceptionalRate: return 5;
    case ErrorKind::InternalInconsistency: return 6;
    case ErrorKind::StabilityViolation: return 7;
    case ErrorKind::Convergence: return 4;
  }
  return 1;
}

}  // namespace conifold
