#pragma once

#include <stdexcept>
#include <string>

namespace bykov {

// Every library failure mode carries one of these codes so callers (and the
// CLI exit-code mapping) can react without string matching.
enum class Err {
  EigenvalueOrder,
  StabilityViolated,
  NonFocus,
  ZeroMismatch,
  SignConvention,
  OutOfDomain,
  NonPositiveHeight,
  NonPositiveRadius,
  NotAGraph,
  NonPositive,
  NoBracket,
  EmptyRange,
  ResolutionExhausted,
  TangentRoot,
  MaxEventsReached,
  CapExceeded,
  NoSolution,
  NoTangencyFound,
  OrderingViolated,
  ParseError,
  UnknownKey,
  InvariantViolation,
};

const char* err_name(Err code);

class ModelError : public std::runtime_error {
 public:
  ModelError(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw ModelError(code, what);
}

}  // namespace bykov
