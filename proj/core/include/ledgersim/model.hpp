#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ledgersim {

using NodeId = std::size_t;
using UserId = std::size_t;
using TxId = std::uint64_t;
using SimTime = double;

/// Per-node reputation weights. Fixed for the lifetime of a run: there is no
/// mutating accessor, so once built the vector can only be read.
class ReputationVector {
 public:
  /// Throws ConfigError if `values` is empty or any entry is not strictly
  /// positive and finite.
  explicit ReputationVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](NodeId node) const { return values_[node]; }
  double at(NodeId node) const { return values_.at(node); }
  std::span<const double> values() const noexcept { return values_; }
  double total() const noexcept { return total_; }
  double max() const noexcept { return max_; }

 private:
  std::vector<double> values_;
  double total_ = 0.0;
  double max_ = 0.0;
};

/// Deterministic Zipf rank weights: node k (0-based) gets weight
/// proportional to (k+1)^-exponent, normalised so the weights sum to
/// `node_count` (mean reputation 1).
ReputationVector generate_reputation(std::size_t node_count, double exponent);

/// A node's advertised quality of service: expected delay (s) and fee.
struct QosIndicator {
  double expected_delay = 0.0;
  double fee = 0.0;
  SimTime published_at = 0.0;

  friend bool operator==(const QosIndicator&, const QosIndicator&) = default;
};

/// One user-issued transaction. `node` and the later timestamps are filled
/// in as the transaction moves through selection, the node's pool, and the
/// scheduler.
struct Transaction {
  TxId id = 0;
  UserId user = 0;
  std::optional<NodeId> node;
  SimTime created_at = 0.0;
  std::optional<SimTime> enqueued_at;
  std::optional<SimTime> issued_at;
  double fee_paid = 0.0;
};

}  // namespace ledgersim
