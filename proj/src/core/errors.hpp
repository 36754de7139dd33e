#pragma once

#include <stdexcept>
#include <string>

namespace cvq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (lattice, probabilities, connectivity).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid input data (schedule files, sample files, arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Calibration targets that no parameter value can reproduce.
class InfeasibleError : public InputError {
 public:
  using InputError::InputError;
};

/// A run that could not complete (e.g. the day never drains).
class SimulationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A metric requested on data where it is undefined (empty sets, zero baselines).
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvq
