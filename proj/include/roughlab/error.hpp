#pragma once

#include <stdexcept>
#include <string>

namespace roughlab {

/// Base class for every error raised by the library. Carries the name of the
/// module that detected the problem so front ends can report it.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// A precondition on the arguments of an operation was violated
/// (bad index, shape mismatch, out-of-range parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The computation itself failed: non-finite values, a solver that could
/// not find an admissible window, and so on.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace roughlab
