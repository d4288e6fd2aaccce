#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leoveri {

enum class ErrorCode {
  InvalidConfig,
  NoVisibleSatellite,
  Unreachable,
  RiskTooLarge,
  PlanInfeasible,
  ZeroThreshold,
  PlanExpired,
  InfeasibleAttack,
  NoRelayFound,
  Decode,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type.
// Callers that need to branch (the scenario driver, mostly) switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace leoveri
