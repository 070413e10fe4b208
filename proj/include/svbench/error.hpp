#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svbench {

// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document. `position` is a byte offset into the input when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class DanglingFaceError : public Error {
 public:
  using Error::Error;
};

class SimplicialIdentityError : public Error {
 public:
  using Error::Error;
};

// Operation requested on an input that violates its precondition
// (non-orientable complex, degree out of range, unsupported dimension, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A lower bound exceeded an upper bound. Raised only when a theorem or the
// implementation is wrong, so callers should let it propagate.
class LedgerInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace svbench
