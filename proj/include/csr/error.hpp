#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csr {

// Every failure the library reports. `Ok` exists so a status field can carry
// "no error" with the same type.
enum class ErrorCode {
  Ok,
  InvalidArgument,
  DimensionMismatch,
  LengthMismatch,
  NonFinite,
  RankDeficient,
  ZeroMatrix,
  DuplicateBin,
  BinOutOfRange,
  MTooLarge,
  AllForbidden,
  ZeroDirection,
  KOutOfRange,
  Infeasible,
  Unbounded,
  MaxIterations,
  Io,
  Parse,
};

// Stable identifier used in CSV status columns and CLI messages.
std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace csr
