#ifndef SUBLAB_ERROR_HPP
#define SUBLAB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sublab {

enum class ErrorCode {
  OutOfDomain,
  DegenerateMetric,
  LeftDomain,
  RankDeficient,
  BasePointMismatch,
  NonPositiveWarp,
  MismatchedBasePoint,
  DisconnectedGraph,
  EmptyFiberNet,
  NotSurjective,
  TooLarge,
  UncoveredTarget,
  InvalidScenario,
  IntegrabilityRequired,
  InvalidConfig,
  InvalidInput,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::BasePointMismatch: return "BasePointMismatch";
    case ErrorCode::NonPositiveWarp: return "NonPositiveWarp";
    case ErrorCode::MismatchedBasePoint: return "MismatchedBasePoint";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::EmptyFiberNet: return "EmptyFiberNet";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UncoveredTarget: return "UncoveredTarget";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::IntegrabilityRequired: return "IntegrabilityRequired";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
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

}  // namespace sublab

#endif  // SUBLAB_ERROR_HPP
