#pragma once

#include <stdexcept>
#include <string>

namespace fpo {

/// Inputs left the admissible region: electron ordering q1 > q2 > 0 or
/// mean ordering m1 > m2 > 0 violated, or a parameter out of range.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// The inner electron did not reach the nucleus within the configured
/// step or time budget; signals an unphysical shooting guess.
class NoCollisionError : public std::runtime_error {
 public:
  explicit NoCollisionError(const std::string& what) : std::runtime_error(what) {}
};

/// A nonlinear solve ran out of iterations or its line search stalled.
class NoConvergenceError : public std::runtime_error {
 public:
  explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature failed to meet its tolerance within the panel budget.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

/// An orbit or branch file was rejected: bad magic/version, truncation,
/// or a violated file invariant. The message names the failed condition.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fpo
