#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fllab {

enum class ErrorKind {
  InvalidConfig,
  Parse,
  PrecisionExhausted,
  DivisionByZero,
  OddValuation,
  SingularSystem,
  NotSplit,
  NotRss,
  SideError,
  NoHermitianOrbit,
  SamplingExhausted,
  ZeroModule,
  ExplosionGuard,
  OracleTooLarge,
  NormalFormFailure,
  ConductorExceeded,
  NotSquare,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fllab
