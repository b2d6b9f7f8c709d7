#pragma once

#include <stdexcept>
#include <string>

namespace modbanach {

// Base of all library errors. Callers that only care about "bad input"
// can catch std::invalid_argument; numerical trouble derives from
// std::runtime_error.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or out-of-range campaign configuration. The message starts
// with the JSON path of the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modbanach
