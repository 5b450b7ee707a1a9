#pragma once

#include <stdexcept>
#include <string>

namespace osum {

enum class ErrKind {
  ResourceExhausted,
  NotSquarefree,
  DivisionByZero,
  UnsupportedKernelShape,
  UnsupportedSystem,
  UnsupportedAdjacencyDegree,
  OrbitBudgetExceeded,
  ExtensionBudgetExceeded,
  RamificationOverflow,
  OrderMismatch,
  UncertifiedTail,
  PreconditionViolated,
  ParseError,
};

inline const char* err_name(ErrKind k) {
  switch (k) {
    case ErrKind::ResourceExhausted: return "ResourceExhausted";
    case ErrKind::NotSquarefree: return "NotSquarefree";
    case ErrKind::DivisionByZero: return "DivisionByZero";
    case ErrKind::UnsupportedKernelShape: return "UnsupportedKernelShape";
    case ErrKind::UnsupportedSystem: return "UnsupportedSystem";
    case ErrKind::UnsupportedAdjacencyDegree: return "UnsupportedAdjacencyDegree";
    case ErrKind::OrbitBudgetExceeded: return "OrbitBudgetExceeded";
    case ErrKind::ExtensionBudgetExceeded: return "ExtensionBudgetExceeded";
    case ErrKind::RamificationOverflow: return "RamificationOverflow";
    case ErrKind::OrderMismatch: return "OrderMismatch";
    case ErrKind::UncertifiedTail: return "UncertifiedTail";
    case ErrKind::PreconditionViolated: return "PreconditionViolated";
    case ErrKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class EngineError : public std::runtime_error {
 public:
  EngineError(ErrKind k, const std::string& what)
      : std::runtime_error(std::string(err_name(k)) + ": " + what), kind_(k) {}
  ErrKind kind() const { return kind_; }

  // CLI exit code: unsupported inputs and blown budgets are 3, the rest
  // are internal errors surfaced as usage-level failures.
  int exit_code() const {
    switch (kind_) {
      case ErrKind::ResourceExhausted:
      case ErrKind::UnsupportedKernelShape:
      case ErrKind::UnsupportedSystem:
      case ErrKind::UnsupportedAdjacencyDegree:
      case ErrKind::OrbitBudgetExceeded:
      case ErrKind::ExtensionBudgetExceeded:
      case ErrKind::RamificationOverflow:
      case ErrKind::UncertifiedTail:
        return 3;
      default:
        return 2;
    }
  }

 private:
  ErrKind kind_;
};

}  // namespace osum
