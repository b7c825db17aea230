#pragma once

#include <stdexcept>
#include <string>

namespace spovm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or register layouts that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a mathematical precondition (trace, positivity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed argument (empty register set, overlapping subsets, unknown name).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Instance exceeds the desk-scale enumeration caps.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace spovm
