#include "ledgersim/drr.hpp"

namespace ledgersim {

DrrScheduler::DrrScheduler(double capacity, const ReputationVector& reputation)
    : capacity_(capacity),
      quanta_(reputation.size()),
      deficits_(reputation.size(), 0.0),
      inboxes_(reputation.size()),
      is_active_(reputation.size(), false) {
  for (NodeId i = 0; i < reputation.size(); ++i) {
    quanta_[i] = reputation[i] / reputation.max();
  }
}

void DrrScheduler::enqueue(NodeId node, TxId tx) {
  inboxes_[node].push_back(tx);
  ++backlog_;
  if (!is_active_[node]) {
    is_active_[node] = true;
    active_.push_back(node);
  }
}

std::vector<ServedTx> DrrScheduler::service_step(SimTime now,
                                                 std::size_t max_slots) {
  std::vector<ServedTx> served;
  while (served.size() < max_slots && !active_.empty()) {
    const NodeId node = active_.front();
    if (!head_credited_) {
      deficits_[node] += quanta_[node];
      head_credited_ = true;
    }
    auto& inbox = inboxes_[node];
    if (deficits_[node] >= 1.0) {
      served.push_back({node, inbox.front(), now});
      inbox.pop_front();
      --backlog_;
      deficits_[node] -= 1.0;
      if (inbox.empty()) {
        // An idle flow keeps no credit.
        deficits_[node] = 0.0;
        is_active_[node] = false;
        active_.pop_front();
        head_credited_ = false;
      }
      continue;
    }
    active_.pop_front();
    active_.push_back(node);
    head_credited_ = false;
  }
  return served;
}

bool congestion_signal(const DrrScheduler& scheduler, NodeId node,
                       double threshold) {
  return static_cast<double>(scheduler.inbox_length(node)) > threshold;
}

}  // namespace ledgersim
