#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dlcfar {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or out-of-domain input (negative loading factor, pfa outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Covariance model that does not yield a positive definite matrix.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Iterative solver failure; carries the last residual.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  explicit NumericalError(const std::string& what) : Error(what), residual_(0.0) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace dlcfar
