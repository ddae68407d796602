#pragma once
#include <stdexcept>
#include <string>

namespace aht {

// Machine-checkable failure categories. Tests assert on the code, messages are for humans.
enum class ErrorCode {
  InvalidResolution,
  GridMismatch,
  WrongDomain,
  NoBoundary,
  LoopOutsideDomain,
  OutOfCollar,
  NonzeroMean,
  IncompatibleData,
  OrderTooLarge,
  InsufficientOrder,
  MalformedExpr,
  MissingFactor,
  WrongLocus,
  WrongShape,
  CflViolation,
  NonFiniteField,
  UnstableStencil,
  LeftDomain,
  LTooSmall,
  NotFound,
  TooLarge,
  ResidualTooLarge,
  BadConfig,
  IoError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace aht
