#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdyn {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

// Raised before any work is done when a path-integral tensor would exceed the
// configured element budget.
class BudgetError : public Error {
public:
  BudgetError(const std::string& what, double required, double budget)
      : Error(what), required_(required), budget_(budget) {}

  double required() const { return required_; }
  double budget() const { return budget_; }

private:
  double required_;
  double budget_;
};

class IntegratorError : public Error {
public:
  IntegratorError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

private:
  double time_;
};

class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, std::size_t k, std::size_t kp)
      : Error(what), k_(k), kp_(kp) {}
  std::size_t k() const { return k_; }
  std::size_t kp() const { return kp_; }

private:
  std::size_t k_;
  std::size_t kp_;
};

}  // namespace qdyn
