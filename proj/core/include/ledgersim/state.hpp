#pragma once

#include <deque>
#include <vector>

#include "ledgersim/aimd.hpp"
#include "ledgersim/model.hpp"
#include "ledgersim/qos.hpp"

namespace ledgersim {

struct NodeState {
  NodeId id = 0;
  double reputation = 1.0;
  std::deque<TxId> ltp;
  AimdState aimd;
  SawtoothFilter filter{1, 1.0};
  QosIndicator indicator;
  double cumulative_fees = 0.0;

  double issue_rate() const noexcept { return aimd.current_rate; }
  /// The denominator used for expected delay.
  double rate_estimate() const noexcept {
    return filter.filtered_rate().value_or(aimd.current_rate);
  }
};

struct UserState {
  UserId id = 0;
  double send_rate = 0.5;
  double tradeoff_weight = 0.6;
  double cost_threshold = 10.0;
  // Fixed selection probabilities for the open-loop policies; recomputed
  // per decision otherwise.
  std::vector<double> probabilities;
  // Transactions held back by DBNS+ because no node was eligible, oldest first.
  std::deque<TxId> deferred;
};

}  // namespace ledgersim
