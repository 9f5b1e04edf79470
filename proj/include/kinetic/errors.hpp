#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kinetic {

// Root of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EpsilonTooLarge : public Error {
 public:
  EpsilonTooLarge(double eps, double eps_max);
  double eps;
  double eps_max;
};

class EtaMomentsInvalid : public Error {
 public:
  using Error::Error;
};

class EtaSupportInvalid : public Error {
 public:
  using Error::Error;
};

class PdfUndefined : public Error {
 public:
  using Error::Error;
};

class SampleUndefined : public Error {
 public:
  using Error::Error;
};

class NotStronglyConnected : public Error {
 public:
  using Error::Error;
};

class RateOverflow : public Error {
 public:
  using Error::Error;
};

// Integrator refused a step that would be numerically unstable.
class StepRejected : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& reason);
  std::string key;
};

}  // namespace kinetic
