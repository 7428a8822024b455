#pragma once

#include <stdexcept>
#include <string>

namespace rotasym {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InvalidProfile : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Iterative solve stopped short; carries what it reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved, int iterations)
      : Error(what), achieved_(achieved), iterations_(iterations) {}
  double achieved_residual() const { return achieved_; }
  int iterations() const { return iterations_; }

 private:
  double achieved_;
  int iterations_;
};

class StepSizeError : public Error {
 public:
  using Error::Error;
};

class IntegratorError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t) : Error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

class ProjectionError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace rotasym
