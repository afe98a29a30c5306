#pragma once

#include <stdexcept>
#include <string>

namespace mgmpcg {

enum class ErrorCode {
  dimension_mismatch,
  invalid_argument,
  singular_system,
  not_spd,
  indefinite_operator,
  config,
  io,
};

/// Hard failure raised by every module. The code lets callers (and the CLI)
/// distinguish configuration mistakes from numerical breakdown.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace mgmpcg
