#pragma once

#include <stdexcept>
#include <string>

namespace heis {

// Base for every numerical failure the library reports. Precondition
// violations on plain arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHorizontal : public Error {
 public:
  NotHorizontal(double residual, double tolerance);
  double residual() const { return residual_; }

 private:
  double residual_;
};

class EndpointMismatch : public Error {
 public:
  explicit EndpointMismatch(double gap);
  double gap() const { return gap_; }

 private:
  double gap_;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Upper bound fell below a certified lower bound; always a bug.
class Inconsistent : public Error {
 public:
  using Error::Error;
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

class InconclusiveProbe : public Error {
 public:
  using Error::Error;
};

// Bad user configuration (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace heis
