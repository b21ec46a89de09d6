#include "ledgersim/qos.hpp"

#include <algorithm>
#include <numeric>

#include "ledgersim/errors.hpp"
#include "ledgersim/state.hpp"

namespace ledgersim {

SawtoothFilter::SawtoothFilter(std::size_t window, double initial_rate)
    : window_(std::max<std::size_t>(window, 1)), previous_rate_(initial_rate) {}

void SawtoothFilter::observe(double rate, RateEvent event) {
  if (event == RateEvent::kDecrease) {
    const double cycle_max = previous_rate_;
    if (pending_min_) {
      cycles_.push_back((*pending_min_ + cycle_max) / 2.0);
      if (cycles_.size() > window_) cycles_.pop_front();
      ++completed_;
      filtered_rate_ = std::accumulate(cycles_.begin(), cycles_.end(), 0.0) /
                       static_cast<double>(cycles_.size());
    }
    pending_min_ = rate;
  }
  previous_rate_ = rate;
}

double expected_delay(std::size_t pool_length, double service_rate) {
  if (!(service_rate > 0.0)) {
    throw EstimatorError("service rate must be positive to estimate delay");
  }
  return static_cast<double>(pool_length) / service_rate;
}

double fee(double expected_delay, const FeeController& controller) {
  return std::max(0.0,
                  controller.gain * (expected_delay - controller.setpoint));
}

QosIndicator publish_indicator(NodeState& node, const FeeController& controller,
                               SimTime now, std::size_t in_scheduler) {
  QosIndicator indicator;
  indicator.expected_delay =
      expected_delay(node.ltp.size() + in_scheduler, node.rate_estimate());
  indicator.fee = fee(indicator.expected_delay, controller);
  indicator.published_at = now;
  node.indicator = indicator;
  return indicator;
}

}  // namespace ledgersim
