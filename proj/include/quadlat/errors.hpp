#pragma once

#include <stdexcept>
#include <string>

namespace quadlat {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called outside its precondition (bad k, a not a root of
// the quadratic congruence, non-quadratical input, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A result failed its own invariant re-check.  Seeing one of these means a
// bug or a falsified claim, never bad user input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// An exhaustive search was asked to run above its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed table text, checkpoint or CSV, with file/line context.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadlat
