#pragma once

#include <stdexcept>
#include <string>

namespace asymwave {

enum class ErrorKind {
  InvalidArgument,  // violated precondition or malformed input
  Domain,           // input outside the domain of a symbol or closed form
  Unsolvable,       // no admissible kernel parameters exist
  Numeric,          // non-finite value or broken invariant during computation
  NotConverged,     // iterative solver ran out of iterations
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace asymwave
