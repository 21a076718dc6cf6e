#pragma once

#include <stdexcept>
#include <string>

namespace omnipipe {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lengths non-positive, reach limits inverted, or a singular Jacobian.
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// Cut plane parallel to (or past) the pipe axis.
class InvalidSection : public Error {
 public:
  using Error::Error;
};

/// The robot cannot press even an untilted circular section.
class InsufficientReach : public Error {
 public:
  using Error::Error;
};

/// Every orientation is forbidden; no rotation can clear the singularity.
class NoEscape : public Error {
 public:
  using Error::Error;
};

/// Malformed network document. Carries the offending segment index (-1 when
/// the error is not tied to one segment).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int segment_index = -1)
      : Error(what), segment_index_(segment_index) {}
  int segment_index() const noexcept { return segment_index_; }

 private:
  int segment_index_;
};

/// Well-formed document whose values break a data-model invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Arc length or index outside the queried segment.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Plan cannot be built or executed as given.
class PlanError : public Error {
 public:
  using Error::Error;
};

}  // namespace omnipipe
