#pragma once

#include <stdexcept>
#include <string>

namespace hybridyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// State vector not normalized, or phase point off the constraint sphere.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class HermiticityError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, double time)
      : Error(what), residual_(residual), time_(time) {}

  double residual() const noexcept { return residual_; }
  double time() const noexcept { return time_; }

 private:
  double residual_;
  double time_;
};

}  // namespace hybridyn
