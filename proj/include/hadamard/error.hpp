#pragma once

#include <stdexcept>
#include <string>

namespace hadamard {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating input (bad JSON, invalid ABP, wrong field).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Division by zero, operands drawn from different fields.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// A configured cap (term count, degree, enumeration size) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hadamard
