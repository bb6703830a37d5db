#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coopbandit {

enum class ErrorCode {
  Disconnected,
  SelfLoop,
  DuplicateEdge,
  NodeOutOfRange,
  TooLarge,
  ArmsTooFew,
  ZeroObservationProbability,
  NonFiniteEstimate,
  EmptyCenterSet,
  Parse,
  Config,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ArmsTooFew: return "ArmsTooFew";
    case ErrorCode::ZeroObservationProbability: return "ZeroObservationProbability";
    case ErrorCode::NonFiniteEstimate: return "NonFiniteEstimate";
    case ErrorCode::EmptyCenterSet: return "EmptyCenterSet";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coopbandit
