#pragma once

#include <stdexcept>
#include <string>

namespace mglan {

enum class ErrorCode {
  InvalidArgument = 1,
  Config = 2,
  Io = 3,
  Parse = 4,
  HashMismatch = 5,
  Internal = 6,
};

/// Library-wide exception. Carries a coarse code so the C boundary can map
/// failures onto stable status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mglan
