#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diagtor {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation requires a field but was handed Z or Z/m.
class UnsupportedRing : public Error {
 public:
  using Error::Error;
};

/// The supplied differentials do not compose to zero.
class NotAComplex : public Error {
 public:
  using Error::Error;
};

/// The supplied chain-map squares do not commute.
class NotAChainMap : public Error {
 public:
  using Error::Error;
};

/// A certificate or structural check that must hold by construction failed.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the configured size budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t required, std::size_t budget)
      : Error(what + ": requires " + std::to_string(required) + " basis elements, budget is " +
              std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::size_t required() const { return required_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

}  // namespace diagtor
