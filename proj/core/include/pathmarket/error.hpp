#pragma once

#include <stdexcept>
#include <string>

namespace pm {

// Error taxonomy mirrored by the CLI exit codes.
enum class ErrorKind {
  invalid_input,    // malformed instance, bad arguments, failed validation
  budget_exceeded,  // work would exceed an enumeration or search budget
  numerical,        // solver failed to converge or overflowed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace pm
