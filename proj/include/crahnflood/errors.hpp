#pragma once

#include <stdexcept>
#include <string>

namespace crahn {

// Stable error identifiers. The CLI maps categories to exit codes:
// bad config/arguments -> 2, infeasible parameters -> 3, numerical -> 4.
enum class Errc {
  kNonPositive,
  kOutageOutOfRange,
  kAlphaTooSmall,
  kBadConfig,
  kOutOfRange,
  kArgOutOfDomain,
  kTrajectoryTooShort,
  kIo,
  kInfeasible,
  kAlphaUnsupported,
  kDegenerateDraw,
  kQuadratureFailure,
  kStepTooLarge,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::kNonPositive: return "NonPositive";
    case Errc::kOutageOutOfRange: return "OutageOutOfRange";
    case Errc::kAlphaTooSmall: return "AlphaTooSmall";
    case Errc::kBadConfig: return "BadConfig";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kArgOutOfDomain: return "ArgOutOfDomain";
    case Errc::kTrajectoryTooShort: return "TrajectoryTooShort";
    case Errc::kIo: return "Io";
    case Errc::kInfeasible: return "Infeasible";
    case Errc::kAlphaUnsupported: return "AlphaUnsupported";
    case Errc::kDegenerateDraw: return "DegenerateDraw";
    case Errc::kQuadratureFailure: return "QuadratureFailure";
    case Errc::kStepTooLarge: return "StepTooLarge";
  }
  return "Unknown";
}

inline int exit_code_for(Errc c) {
  switch (c) {
    case Errc::kInfeasible:
    case Errc::kAlphaUnsupported:
    case Errc::kDegenerateDraw:
      return 3;
    case Errc::kQuadratureFailure:
    case Errc::kStepTooLarge:
      return 4;
    default:
      return 2;
  }
}

}  // namespace crahn
