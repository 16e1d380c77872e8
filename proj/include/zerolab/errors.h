#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace zerolab {

// Bad argument for a mathematical operation (zero polynomial gcd, bad index).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Minor enumeration over a matrix larger than the supported size.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// The system lacks a structural property an algorithm requires
// (controllability, full input rank, Asseo eligibility).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition (D = 0, square system, coprimeness) fails.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zero polynomial identically zero: every s is a zero.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative numeric routine did not converge.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::complex<double> best)
      : std::runtime_error(what), best_(best) {}
  explicit NumericError(const std::string& what)
      : std::runtime_error(what) {}
  std::complex<double> best_iterate() const { return best_; }

 private:
  std::complex<double> best_{};
};

// Model file or flag could not be understood.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zerolab
