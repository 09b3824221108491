#pragma once

#include <stdexcept>
#include <string>

namespace spacesim {

enum class ErrorCode {
  NonTopological,
  FanInExceeded,
  FanOutExceeded,
  BadInputIndex,
  InputLengthMismatch,
  BadInterval,
  MalformedPlan,
  GateOutOfPlan,
  StepLimitExceeded,
  BudgetExceeded,
  ParseError,
  BadFamily,
  BadMachine,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. Every failure the public API reports carries a
/// code so callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spacesim
