#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdasim {

enum class ErrorCode {
  ConfigInvalid,
  RangeViolation,
  TraderFault,
  FillWithoutAssignment,
  MissingEquilibrium,
  NoSuchAlgoInSession,
  QueueOverflowPolicyViolated,
  JoinTimeout,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cdasim
