#pragma once

#include <stdexcept>
#include <string>

namespace roughmetrics {

/// Base class of everything this library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: non-square matrix, negative or NaN entry,
/// duplicate points in an ordered set.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// Input data parses but does not satisfy the metric axioms.
class MetricViolation : public Error {
public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range.
class DomainError : public Error {
public:
  using Error::Error;
};

/// An input set does not meet the hypotheses an operation relies on.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Unreadable file or JSON that does not describe a space.
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace roughmetrics
