#pragma once

#include <stdexcept>
#include <string>

namespace racetrack {

/// Invalid parameters or configuration. Messages name the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-convergence, non-finite intermediates, negative densities.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace racetrack
