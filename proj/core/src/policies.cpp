#include "ledgersim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ledgersim/errors.hpp"

namespace ledgersim {
namespace {

void normalize(Probabilities& weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  for (double& w : weights) w /= sum;
}

}  // namespace

Probabilities urns_probabilities(std::size_t node_count) {
  if (node_count == 0) throw PolicyError("URNS needs at least one node");
  return Probabilities(node_count, 1.0 / static_cast<double>(node_count));
}

Probabilities rbns_probabilities(const ReputationVector& reputation) {
  return rbns_probabilities(reputation.values());
}

Probabilities rbns_probabilities(std::span<const double> reputation) {
  if (reputation.empty()) throw PolicyError("RBNS needs at least one node");
  Probabilities p(reputation.begin(), reputation.end());
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p[j] > 0.0)) {
      throw PolicyError("RBNS: reputation of node " + std::to_string(j) +
                        " is not positive");
    }
  }
  normalize(p);
  return p;
}

Probabilities dbns_probabilities(const ReputationVector& reputation,
                                 std::span<const double> delays,
                                 double min_delay) {
  if (delays.size() != reputation.size()) {
    throw PolicyError("DBNS: " + std::to_string(delays.size()) +
                      " delays for " + std::to_string(reputation.size()) +
                      " nodes");
  }
  Probabilities p(reputation.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (delays[j] < 0.0 || std::isnan(delays[j])) {
      throw PolicyError("DBNS: negative delay for node " + std::to_string(j));
    }
    p[j] = reputation[j] / std::max(delays[j], min_delay);
  }
  normalize(p);
  return p;
}

double cost(double delay, double fee, double tradeoff_weight) {
  return tradeoff_weight * delay + (1.0 - tradeoff_weight) * fee;
}

std::optional<Probabilities> dbns_plus_probabilities(const PolicyInput& input) {
  const auto& reps = input.reputation;
  if (input.indicators.size() != reps.size()) {
    throw PolicyError("DBNS+: indicator count does not match node count");
  }
  Probabilities p(reps.size(), 0.0);
  bool any = false;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const auto& q = input.indicators[j];
    const double c = cost(q.expected_delay, q.fee, input.tradeoff_weight);
    if (c > input.cost_threshold) continue;
    p[j] = reps[j] / std::max(c, input.min_cost);
    any = true;
  }
  if (!any) return std::nullopt;
  normalize(p);
  return p;
}

std::optional<NodeId> dbns_plus_select(const PolicyInput& input, Rng& rng) {
  auto p = dbns_plus_probabilities(input);
  if (!p) return std::nullopt;
  return sample_node(*p, rng);
}

NodeId sample_node_at(std::span<const double> p, double draw) {
  double cumulative = 0.0;
  NodeId last_positive = 0;
  for (NodeId j = 0; j < p.size(); ++j) {
    if (p[j] <= 0.0) continue;
    cumulative += p[j];
    last_positive = j;
    if (draw < cumulative) return j;
  }
  // Rounding left the CDF a hair below 1.
  return last_positive;
}

NodeId sample_node(std::span<const double> p, Rng& rng) {
  if (p.empty()) throw PolicyError("cannot sample an empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw PolicyError("probability entries must be >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw PolicyError("probabilities sum to " + std::to_string(sum) +
                      ", expected 1");
  }
  return sample_node_at(p, rng.uniform());
}

}  // namespace ledgersim
