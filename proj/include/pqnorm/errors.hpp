#ifndef PQNORM_ERRORS_HPP
#define PQNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pqnorm {

// Invalid arguments: exponents out of range, bad orders, excluded points.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unreadable or malformed input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature or iteration did not reach the requested accuracy.
class AccuracyError : public NumericalError {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : NumericalError(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const { return estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

// A bound could not be certified; carries the uncertified value.
class CertificationError : public NumericalError {
 public:
  CertificationError(const std::string& what, double value)
      : NumericalError(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

}  // namespace pqnorm

#endif  // PQNORM_ERRORS_HPP
