#pragma once

#include <stdexcept>
#include <string>

namespace steerbound {

enum class ErrorKind {
  precondition,   // invalid arguments or inputs
  parse,          // malformed input file
  assertion,      // a computed quantity violated a proven bound
  cap_exceeded,   // strategy enumeration above the configured cap
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::precondition, what);
}

}  // namespace steerbound
