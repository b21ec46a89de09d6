#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "ledgersim/model.hpp"

namespace ledgersim {

struct ServedTx {
  NodeId node = 0;
  TxId tx = 0;
  SimTime issued_at = 0.0;
};

/// Deficit round robin over per-node inboxes, quantum proportional to
/// reputation. Each service slot issues one transaction of unit cost; the
/// caller paces slots at the aggregate capacity.
///
/// Quanta are rep_i / max(rep), so the largest node earns one transaction
/// per round and smaller nodes accumulate deficit across rounds.
class DrrScheduler {
 public:
  DrrScheduler(double capacity, const ReputationVector& reputation);

  void enqueue(NodeId node, TxId tx);

  /// Serves up to `max_slots` transactions, stamping each with `now`.
  /// Returns fewer (possibly none) only when every inbox drains.
  std::vector<ServedTx> service_step(SimTime now, std::size_t max_slots = 1);

  std::size_t inbox_length(NodeId node) const { return inboxes_[node].size(); }
  std::size_t backlog() const noexcept { return backlog_; }
  bool empty() const noexcept { return backlog_ == 0; }
  std::size_t node_count() const noexcept { return inboxes_.size(); }
  double capacity() const noexcept { return capacity_; }
  double quantum(NodeId node) const { return quanta_[node]; }
  double deficit(NodeId node) const { return deficits_[node]; }

 private:
  double capacity_;
  std::vector<double> quanta_;
  std::vector<double> deficits_;
  std::vector<std::deque<TxId>> inboxes_;
  // Round-robin order of nodes with a nonempty inbox.
  std::deque<NodeId> active_;
  std::vector<bool> is_active_;
  // Whether the node at the head of active_ already received its quantum
  // for the current visit.
  bool head_credited_ = false;
  std::size_t backlog_ = 0;
};

/// True iff the node's inbox holds strictly more than `threshold` entries.
bool congestion_signal(const DrrScheduler& scheduler, NodeId node,
                       double threshold);

}  // namespace ledgersim
