#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid levels, steps, replicate counts, CLI values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant was violated. Indicates a bug, not bad input.
class InvariantBreach : public Error {
 public:
  using Error::Error;
};

class InvalidLevels : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnsupportedStep : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InsufficientReplicates : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyRun : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MissingTaps : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Both output amplitudes of an adaptive splitter vanished.
class DegenerateAmplitude : public InvariantBreach {
 public:
  using InvariantBreach::InvariantBreach;
};

/// Traversal reached an output port with no wire attached.
class UnwiredPort : public InvariantBreach {
 public:
  using InvariantBreach::InvariantBreach;
};

}  // namespace qwalk
