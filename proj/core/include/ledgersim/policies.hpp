#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ledgersim/model.hpp"
#include "ledgersim/rng.hpp"

namespace ledgersim {

using Probabilities = std::vector<double>;

/// Delays (and DBNS+ costs) are clamped to at least this before inversion.
inline constexpr double kDefaultMinDelay = 0.01;

/// Tolerance on sum(p) == 1 accepted by sample_node.
inline constexpr double kProbabilityTolerance = 1e-9;

Probabilities urns_probabilities(std::size_t node_count);

Probabilities rbns_probabilities(const ReputationVector& reputation);
/// Raw-weight form; throws PolicyError on a nonpositive entry.
Probabilities rbns_probabilities(std::span<const double> reputation);

/// p_j proportional to rep_j / max(tau_j, min_delay).
Probabilities dbns_probabilities(const ReputationVector& reputation,
                                 std::span<const double> delays,
                                 double min_delay = kDefaultMinDelay);

/// Weighted trade-off between delay and fee for one user.
double cost(double delay, double fee, double tradeoff_weight);

struct PolicyInput {
  const ReputationVector& reputation;
  std::span<const QosIndicator> indicators;
  double tradeoff_weight = 0.6;
  double cost_threshold = 10.0;
  double min_cost = kDefaultMinDelay;
};

/// Full-length probability vector for DBNS+: zero for nodes whose cost
/// exceeds the threshold, rep_j / cost_j normalised over the rest.
/// nullopt when no node is eligible.
std::optional<Probabilities> dbns_plus_probabilities(const PolicyInput& input);

/// nullopt means no eligible node; the caller holds the transaction back.
std::optional<NodeId> dbns_plus_select(const PolicyInput& input, Rng& rng);

/// Inverse-CDF selection for a given uniform draw in [0, 1).
NodeId sample_node_at(std::span<const double> p, double draw);

/// Validates p (entries >= 0, sum within kProbabilityTolerance of 1) and
/// samples it with one uniform draw. Throws PolicyError on malformed p.
NodeId sample_node(std::span<const double> p, Rng& rng);

}  // namespace ledgersim
