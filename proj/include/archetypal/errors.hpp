#pragma once

#include <stdexcept>

namespace archetypal {

/// Base class of all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed coefficient measure (probabilities off, empty support, zero alpha).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A required log-moment is not finite.
class MomentError : public Error {
 public:
  using Error::Error;
};

/// Operation called in the wrong criticality regime (sign of K).
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Operation requires P(alpha<0)>0 (or =0) and the spec does not satisfy it.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// F_Upsilon exists but does not solve the equation for this spec.
class NotASolutionError : public Error {
 public:
  using Error::Error;
};

/// Spec admits a degenerate fixed point alpha*(c-beta)=c a.s.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace archetypal
