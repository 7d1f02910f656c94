#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cimac {

// Base for every error raised by the library. Each subclass maps to one
// failure mode callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Scenario or policy file could not be parsed or failed validation.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// The observed joint action has zero probability under the belief and the
// prescriptions in force.
class ImpossibleObservation : public Error {
 public:
  using Error::Error;
};

class StateExplosion : public Error {
 public:
  StateExplosion(int time_step, std::size_t count, std::size_t cap);

  int time_step() const { return time_step_; }
  std::size_t count() const { return count_; }

 private:
  int time_step_;
  std::size_t count_;
};

class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

// Lookup of a belief that is not in the solved support at that time step.
class UnreachableBelief : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// Exact evaluation visited more histories than its configured cap.
class ExplosionError : public Error {
 public:
  using Error::Error;
};

// A policy file was produced for a different scenario.
class FingerprintMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace cimac
