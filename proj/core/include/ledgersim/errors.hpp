#pragma once

#include <stdexcept>
#include <string>

namespace ledgersim {

// Invalid or unparsable configuration. Raised before any simulation work.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input to a node-selection policy (bad probability vector,
// nonpositive reputation, empty node set).
class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Expected-delay estimation was asked to divide by a nonpositive rate.
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure writing or reading an output artifact. The message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ledgersim
