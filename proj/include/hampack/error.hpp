#pragma once

#include <stdexcept>
#include <string>

namespace hampack {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar argument is outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A structured input (graph, pair list, path system) violates a precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The instance is larger than an exact routine supports.
class SizeLimit : public Error {
 public:
  using Error::Error;
};

/// A postcondition that should hold by construction was found broken.
class InternalInvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Edge-assignment could not satisfy its balance requirement.
class SetupFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace hampack
