#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lagstab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// expression language

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected, const std::string& detail = {});

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnboundParameter : public Error {
 public:
  explicit UnboundParameter(std::string name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Evaluation outside the domain of a node (log/sqrt of a non-positive value,
/// division by zero, non-finite intermediate) or outside a working interval.
class DomainError : public Error {
 public:
  DomainError(std::string what, double y);
  double y() const noexcept { return y_; }

 private:
  double y_;
};

// ---------------------------------------------------------------------------
// system / catalog

class SingularMetric : public DomainError {
 public:
  explicit SingularMetric(double y);
};

class UnknownBuiltin : public Error {
 public:
  explicit UnknownBuiltin(const std::string& name);
};

class MissingParameter : public Error {
 public:
  MissingParameter(const std::string& builtin, const std::string& name);
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// variationality and multipliers

class Phi22Vanishes : public DomainError {
 public:
  explicit Phi22Vanishes(double y);
};

class InconsistentCriteria : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(double a, double b);
};

class EquilibriumMissing : public Error {
 public:
  EquilibriumMissing(double s0, double u0);
};

// ---------------------------------------------------------------------------
// synthesis

class RootFindFailure : public DomainError {
 public:
  explicit RootFindFailure(double y);
};

class SingularAtEquilibrium : public Error {
 public:
  SingularAtEquilibrium();
};

class DenominatorVanishes : public DomainError {
 public:
  explicit DenominatorVanishes(double y);
};

class FNotNegative : public Error {
 public:
  FNotNegative(double x, double y, double value);
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double x_;
  double y_;
};

// ---------------------------------------------------------------------------
// simulation

class LeftWorkingInterval : public Error {
 public:
  LeftWorkingInterval(double t, double y);
  double time() const noexcept { return t_; }

 private:
  double t_;
};

class NonFiniteState : public Error {
 public:
  explicit NonFiniteState(double t);
  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace lagstab
