#pragma once

#include <stdexcept>
#include <string>

namespace ttinherit {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An index or set lies outside its declared domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Non-finite input to a numeric kernel.
class NumericError : public Error {
public:
  using Error::Error;
};

/// A matrix that must have positive rank is numerically zero.
class RankError : public Error {
public:
  using Error::Error;
};

/// A subsampled factor lost column rank; its pseudoinverse is unbounded.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// TT cores do not chain (or boundary ranks are not 1).
class StructuralError : public Error {
public:
  using Error::Error;
};

/// A dense materialization would exceed the configured entry cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

class SamplingError : public Error {
public:
  using Error::Error;
};

/// Rank-valid tensor could not be drawn within the regeneration budget.
class GenerationError : public Error {
public:
  using Error::Error;
};

/// Index sets violate the nesting required by the row-sampling scheme.
class PreconditionError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace ttinherit
