#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "ledgersim/model.hpp"

namespace ledgersim {

enum class RateEvent { kIncrease, kDecrease };

/// Max-min moving average over AIMD sawtooth cycles.
///
/// A decrease event marks the cycle maximum (the rate just before the cut)
/// and the next cycle's minimum (the rate just after). When a cycle has both
/// ends, its midpoint (min + max) / 2 enters a window of the last `window`
/// cycle midpoints, and the filtered rate is the mean of that window.
class SawtoothFilter {
 public:
  SawtoothFilter(std::size_t window, double initial_rate);

  /// `rate` is the rate after the event.
  void observe(double rate, RateEvent event);

  /// Absent until the first cycle closes.
  std::optional<double> filtered_rate() const { return filtered_rate_; }
  std::optional<double> pending_min() const { return pending_min_; }
  double previous_rate() const noexcept { return previous_rate_; }
  const std::deque<double>& cycle_averages() const noexcept { return cycles_; }
  std::size_t window() const noexcept { return window_; }
  std::size_t completed_cycles() const noexcept { return completed_; }

 private:
  std::size_t window_;
  std::optional<double> pending_min_;
  std::deque<double> cycles_;
  std::optional<double> filtered_rate_;
  double previous_rate_;
  std::size_t completed_ = 0;
};

/// Pool length over service rate. Throws EstimatorError if rate <= 0.
double expected_delay(std::size_t pool_length, double service_rate);

struct FeeController {
  double gain = 0.8;
  double setpoint = 15.0;
};

/// Proportional fee on delay above the setpoint, clamped at zero.
double fee(double expected_delay, const FeeController& controller);

struct NodeState;

/// Recomputes and stores the node's advertised indicator from its current
/// pool length and filtered rate (instantaneous AIMD rate until the first
/// sawtooth cycle completes). `in_scheduler` counts the node's transactions
/// already handed to the scheduler but not yet served, which sit ahead of
/// any new arrival and so count toward the pool length.
QosIndicator publish_indicator(NodeState& node, const FeeController& controller,
                               SimTime now, std::size_t in_scheduler = 0);

}  // namespace ledgersim
