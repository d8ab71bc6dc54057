#pragma once

#include <stdexcept>
#include <string>

namespace noiselab {

// Bad argument to a library operation (probability out of range, empty group, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidNoiseSpec : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyInput : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class OutOfRange : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Malformed or out-of-range experiment configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noiselab
