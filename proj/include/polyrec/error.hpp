#pragma once

#include <stdexcept>
#include <string>

namespace polyrec {

enum class ErrorCode {
  kInvalidArgument = 1,
  kPrecondition = 2,
  kBudgetExceeded = 3,
  kNumerical = 4,
  kInternal = 5,
};

// Every failure raised by the core library carries one of the codes above so
// the C layer can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace polyrec
