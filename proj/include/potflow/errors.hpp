#pragma once

#include <stdexcept>
#include <string>

namespace potflow {

/// Input outside the mathematical domain of a function (vacuum, negative heat, M <= 1, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Caller combined arguments that cannot go together (model mismatch, wrong dims).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite intermediate values or a failed convergence.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two independent checks of the same property disagree.
class InconsistencyError : public NumericError {
public:
  InconsistencyError(const std::string& what, double first, double second)
      : NumericError(what), first_(first), second_(second) {}

  double first() const noexcept { return first_; }
  double second() const noexcept { return second_; }

private:
  double first_;
  double second_;
};

/// Time stepping produced a vacuum or NaN cell.
class SimulationError : public NumericError {
public:
  SimulationError(const std::string& what, long cell, double time)
      : NumericError(what), cell_(cell), time_(time) {}

  long cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }

private:
  long cell_;
  double time_;
};

} // namespace potflow
