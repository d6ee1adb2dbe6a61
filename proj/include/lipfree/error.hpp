#pragma once

#include <stdexcept>
#include <string>

namespace lipfree {

enum class ErrorCode {
  kInvalidArgument,     // caller violated a precondition
  kStructural,          // malformed input (non-square, non-finite, bad JSON)
  kDomain,              // well-formed input outside the operation's domain
  kCapExceeded,         // desk-scale size cap
  kVerificationFailed,  // a post-hoc certificate check did not hold
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lipfree
