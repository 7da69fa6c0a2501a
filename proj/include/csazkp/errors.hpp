#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csazkp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (dimension mismatch, bad parameter).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A structure-constant tensor is not an associative unital algebra.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A rejection-sampling loop exhausted its retry cap.
class RandomnessError : public Error {
 public:
  using Error::Error;
};

/// The zero-knowledge simulator exhausted its restart cap.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// The prover refused a challenge that is not a verified isomorphism.
class ChallengeRejected : public Error {
 public:
  using Error::Error;
};

/// Deterministic challenge derivation failed (same inputs always fail).
class DerivationError : public Error {
 public:
  using Error::Error;
};

/// Strict decoding failure. `position` is a byte offset into the input.
class DecodeError : public Error {
 public:
  enum class Kind { syntax, dimension, validation };

  DecodeError(Kind kind, std::size_t position, const std::string& what)
      : Error(std::string(kind_name(kind)) + " error at byte " + std::to_string(position) + ": " + what),
        kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

  static const char* kind_name(Kind k) noexcept {
    switch (k) {
      case Kind::syntax:
        return "syntax";
      case Kind::dimension:
        return "dimension";
      case Kind::validation:
        return "validation";
    }
    return "decode";
  }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Live session failure: framing, ordering, validation or timeout.
class SessionError : public Error {
 public:
  using Error::Error;
};

}  // namespace csazkp
