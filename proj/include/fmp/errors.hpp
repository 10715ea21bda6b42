#pragma once

#include <stdexcept>
#include <string>

namespace fmp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bayes filter got an observation with zero probability under the model.
class ImpossibleObservation : public Error {
 public:
  using Error::Error;
};

// .pomdp parsing: malformed input, reported with a 1-based line number.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

// .pomdp parsing: well-formed input that violates model semantics
// (unnormalized rows, undeclared identifiers, duplicate headers).
class SemanticError : public Error {
 public:
  explicit SemanticError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

// .pomdp parsing: reward outside [0, R_max] without normalization enabled.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration oracle asked for more work than its guard allows.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A belief-tree level grew past the configured unique-node cap.
class MemoryBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Target error so loose that a horizon-0 plan already satisfies it.
class DegenerateTarget : public Error {
 public:
  using Error::Error;
};

class EmptyBelief : public Error {
 public:
  using Error::Error;
};

// Rejection particle filter lost every particle and no exact fallback exists.
class ParticleDepletion : public Error {
 public:
  using Error::Error;
};

class TerminalState : public Error {
 public:
  using Error::Error;
};

class InvalidAction : public Error {
 public:
  using Error::Error;
};

}  // namespace fmp
