#pragma once

#include <stdexcept>
#include <string>

namespace ssadr {

// Invalid configuration: bad dimensions, bounds, unknown keys.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller passed an argument outside the operation's domain.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An operation was invoked in a state that does not allow it.
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// A NaN or infinity showed up where a finite value is required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ssadr
