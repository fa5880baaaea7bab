#pragma once

#include <stdexcept>
#include <string>

namespace rationing {

enum class Errc {
  NonPositiveRate,
  BadThreshold,
  PriorityViolation,
  InvalidPolicy,
  LengthMismatch,
  InvalidOrder,
  CapExceeded,
  NumericalOverflow,
  SingularSystem,
  InconsistentTermination,
  IndexOutOfRange,
  NotSingleFlip,
  ThetaOutOfRange,
  NeighborUndefined,
  EmptyGrid,
  InvalidArgument,
};

inline const char* to_string(Errc e) {
  switch (e) {
    case Errc::NonPositiveRate: return "NonPositiveRate";
    case Errc::BadThreshold: return "BadThreshold";
    case Errc::PriorityViolation: return "PriorityViolation";
    case Errc::InvalidPolicy: return "InvalidPolicy";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidOrder: return "InvalidOrder";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::NumericalOverflow: return "NumericalOverflow";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::InconsistentTermination: return "InconsistentTermination";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NotSingleFlip: return "NotSingleFlip";
    case Errc::ThetaOutOfRange: return "ThetaOutOfRange";
    case Errc::NeighborUndefined: return "NeighborUndefined";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rationing
