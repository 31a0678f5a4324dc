#ifndef RAILSCHED_ERROR_HPP
#define RAILSCHED_ERROR_HPP

#include <stdexcept>
#include <string>

namespace railsched {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A document field is missing or has the wrong type.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// An identifier names an entity that does not exist.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

/// Scheduled times contradict the route order or running times.
class TemporalError : public Error {
 public:
  using Error::Error;
};

/// A value is out of its admissible range (negative minutes, empty track set, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The synthetic generator cannot honour the requested density.
class InfeasibleGeneration : public Error {
 public:
  using Error::Error;
};

/// Bad arguments to an operation (zero budget, too many binaries, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Broken internal consistency, e.g. an index set referencing an undeclared variable.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace railsched

#endif  // RAILSCHED_ERROR_HPP
