#include "ledgersim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ledgersim/errors.hpp"

namespace ledgersim {

ReputationVector::ReputationVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw ConfigError("reputation vector must not be empty");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw ConfigError("reputation of node " + std::to_string(i) +
                        " must be positive and finite");
    }
  }
  total_ = std::accumulate(values_.begin(), values_.end(), 0.0);
  max_ = *std::max_element(values_.begin(), values_.end());
}

ReputationVector generate_reputation(std::size_t node_count, double exponent) {
  if (node_count == 0) {
    throw ConfigError("node_count must be at least 1");
  }
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw ConfigError("zipf_exponent must be finite and >= 0");
  }
  std::vector<double> weights(node_count);
  double sum = 0.0;
  for (std::size_t k = 0; k < node_count; ++k) {
    weights[k] = std::pow(static_cast<double>(k + 1), -exponent);
    sum += weights[k];
  }
  const double scale = static_cast<double>(node_count) / sum;
  for (double& w : weights) w *= scale;
  return ReputationVector(std::move(weights));
}

}  // namespace ledgersim
