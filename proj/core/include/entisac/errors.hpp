#pragma once

#include <stdexcept>
#include <string>

namespace entisac {

/// Invalid or inconsistent run/scenario configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Coincident or otherwise degenerate geometry (zero-distance nodes).
struct GeometryError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A frame whose estimation overhead exceeds the slot budget.
struct InfeasibleFrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure (singular matrix, value out of distribution support).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Observation requested before the protocol stage that produces it.
struct CausalityError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Action vectors whose count or shape does not match the agent layout.
struct InterfaceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Checkpoint file malformed or incompatible with the current configuration.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace entisac
