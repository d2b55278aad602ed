#pragma once

#include <stdexcept>
#include <string>

namespace divcut {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad index, dimension mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A size cap of an exhaustive routine was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Terminals cannot be joined, or a demand cannot be served by the supply.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its round or pivot limit.
class LimitReached : public Error {
 public:
  using Error::Error;
};

}  // namespace divcut
