#pragma once

#include <stdexcept>

namespace quditsim {

/// Invalid input parameters or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A physical assumption of the model does not hold (e.g. eigenstates are not
/// close to product states, RWA validity).
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The pulse compiler could not realize a gate within the policy limits.
class SchedulingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quditsim
