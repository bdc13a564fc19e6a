#pragma once

#include <stdexcept>
#include <string>

namespace modyn {

// Root of the library's error hierarchy. Everything thrown on purpose by this
// library derives from Error, so callers can catch one type at the boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input that never became a Scenario: bad JSON, wrong types,
// unknown keys, ragged matrices. The message carries a JSON-path-like
// location where that is known.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A structurally well-formed Scenario that breaks a model invariant
// (row sums, partitions, connectivity, ...). The message lists every
// violation found, one per line.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The joint state space exceeds the configured cap.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

// An adaptive numerical routine could not meet its error target.
class ToleranceNotMet : public Error {
 public:
  using Error::Error;
};

// A linear solve produced no usable solution (singular system or a residual
// above the requested tolerance).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// Operands with incompatible shapes.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// An agent id that does not occur in the scenario.
class UnknownAgent : public Error {
 public:
  using Error::Error;
};

// A modulated rate was requested for the state the agent already occupies.
class SelfTransition : public Error {
 public:
  using Error::Error;
};

// A joint state index or digit outside the codec's range.
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace modyn
