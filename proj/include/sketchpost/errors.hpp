#pragma once

#include <stdexcept>
#include <string>

namespace sketchpost {

// Invalid argument / parameter outside its mathematical domain.
// The command-line driver maps this family to exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested exactly at a pole (e.g. digamma at a nonpositive
// integer, or a rising factorial crossing zero).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A tractability gate refused the computation (problem size above the
// documented exact-enumeration limit).  Driver exit code 3.
class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Monte Carlo ratio estimate degenerated (normalizing sample mass
// underflowed to zero or is non-finite).  Driver exit code 3.
class DegenerateMcError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical integration failed to reach its target tolerance.  The achieved
// error estimate is carried so callers can report it.  Driver exit code 3.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error(achieved_error) {}
  double achieved_error;
};

// File / stream failures.  Driver exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sketchpost
