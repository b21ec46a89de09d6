#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "ledgersim/aimd.hpp"
#include "ledgersim/errors.hpp"
#include "ledgersim/qos.hpp"
#include "ledgersim/rng.hpp"
#include "ledgersim/state.hpp"

namespace ledgersim {
namespace {

// Drives a filter through a cycle that starts at `min` and peaks at `max`.
void feed_cycle(SawtoothFilter& f, double min, double max) {
  f.observe(min, RateEvent::kDecrease);
  f.observe(max, RateEvent::kIncrease);
}

TEST(SawtoothFilter, NoEstimateBeforeFirstCycle) {
  SawtoothFilter f(5, 3.0);
  EXPECT_FALSE(f.filtered_rate());
  f.observe(3.5, RateEvent::kIncrease);
  EXPECT_FALSE(f.filtered_rate());
  f.observe(2.45, RateEvent::kDecrease);
  EXPECT_FALSE(f.filtered_rate());
  EXPECT_DOUBLE_EQ(*f.pending_min(), 2.45);
}

TEST(SawtoothFilter, CycleMidpoint) {
  SawtoothFilter f(5, 1.0);
  feed_cycle(f, 4.0, 8.0);
  f.observe(5.6, RateEvent::kDecrease);
  ASSERT_EQ(f.cycle_averages().size(), 1u);
  EXPECT_DOUBLE_EQ(f.cycle_averages().back(), 6.0);
  EXPECT_DOUBLE_EQ(*f.filtered_rate(), 6.0);
}

TEST(SawtoothFilter, ConstantCycles) {
  SawtoothFilter f(3, 1.0);
  for (int k = 0; k < 4; ++k) feed_cycle(f, 4.0, 8.0);
  f.observe(4.0, RateEvent::kDecrease);
  EXPECT_EQ(f.completed_cycles(), 4u);
  EXPECT_DOUBLE_EQ(*f.filtered_rate(), 6.0);
}

TEST(SawtoothFilter, WindowSlides) {
  SawtoothFilter f(2, 1.0);
  feed_cycle(f, 2.0, 6.0);  // opens cycle with min 2
  feed_cycle(f, 4.0, 12.0);  // closes [2, 6] -> 4, opens min 4
  feed_cycle(f, 8.0, 12.0);  // closes [4, 12] -> 8, opens min 8
  f.observe(2.0, RateEvent::kDecrease);  // closes [8, 12] -> 10
  ASSERT_EQ(f.cycle_averages().size(), 2u);
  EXPECT_DOUBLE_EQ(f.cycle_averages()[0], 8.0);
  EXPECT_DOUBLE_EQ(f.cycle_averages()[1], 10.0);
  EXPECT_DOUBLE_EQ(*f.filtered_rate(), 9.0);
}

TEST(SawtoothFilter, ReplayedAimdTraces) {
  Rng rng(17);
  for (std::size_t window : {1u, 2u, 5u, 9u}) {
    AimdState s;
    s.current_rate = 3.0;
    s.additive_step = 0.05;
    s.rate_cap = 50.0;
    s.decrease_cooldown = 0.0;
    SawtoothFilter f(window, s.current_rate);

    std::vector<double> averages;
    std::vector<std::pair<double, double>> extremes;
    std::optional<double> open_min;
    for (int k = 1; k <= 5000; ++k) {
      const auto out = aimd_tick(s, rng.uniform() < 0.08, 0.1 * k);
      s = out.state;
      if (out.event == AimdEvent::kHold) continue;
      const bool cut = out.event == AimdEvent::kDecrease;
      f.observe(s.current_rate, cut ? RateEvent::kDecrease : RateEvent::kIncrease);
      if (!cut) continue;
      if (open_min) {
        averages.push_back((*open_min + out.previous_rate) / 2.0);
        extremes.emplace_back(*open_min, out.previous_rate);
      }
      open_min = s.current_rate;

      if (averages.empty()) {
        ASSERT_FALSE(f.filtered_rate());
        continue;
      }
      const std::size_t n = std::min(window, averages.size());
      const double expected =
          std::accumulate(averages.end() - n, averages.end(), 0.0) / n;
      ASSERT_NEAR(*f.filtered_rate(), expected, 1e-12);
      double lo = 1e300, hi = 0.0;
      for (auto it = extremes.end() - n; it != extremes.end(); ++it) {
        lo = std::min(lo, it->first);
        hi = std::max(hi, it->second);
      }
      ASSERT_GE(*f.filtered_rate(), lo);
      ASSERT_LE(*f.filtered_rate(), hi);
    }
    EXPECT_GT(averages.size(), 100u);
  }
}

TEST(ExpectedDelay, Substitution) {
  EXPECT_DOUBLE_EQ(expected_delay(10, 5.0), 2.0);
  EXPECT_DOUBLE_EQ(expected_delay(0, 3.7), 0.0);
  EXPECT_DOUBLE_EQ(expected_delay(750, 50.0), 15.0);
}

TEST(ExpectedDelay, Homogeneous) {
  for (std::size_t l : {1u, 7u, 300u}) {
    for (double r : {0.3, 2.0, 41.0}) {
      EXPECT_DOUBLE_EQ(expected_delay(2 * l, 2 * r), expected_delay(l, r));
    }
  }
}

TEST(ExpectedDelay, NonpositiveRateIsError) {
  EXPECT_THROW(expected_delay(3, 0.0), EstimatorError);
  EXPECT_THROW(expected_delay(3, -1.0), EstimatorError);
}

TEST(Fee, ProportionalAboveSetpoint) {
  const FeeController c{0.8, 15.0};
  EXPECT_DOUBLE_EQ(fee(15.0, c), 0.0);
  EXPECT_DOUBLE_EQ(fee(20.0, c), 4.0);
  EXPECT_DOUBLE_EQ(fee(5.0, c), 0.0);
}

TEST(Fee, ClampedAndMonotone) {
  const FeeController c{0.8, 15.0};
  double last = 0.0;
  for (double tau = 0.0; tau <= 100.0; tau += 0.25) {
    const double s = fee(tau, c);
    if (tau <= 15.0) {
      EXPECT_EQ(s, 0.0);
    }
    EXPECT_GE(s, last);
    last = s;
  }
}

NodeState node_with(std::size_t ltp, double rate) {
  NodeState node;
  node.aimd.current_rate = rate;
  for (std::size_t i = 0; i < ltp; ++i) node.ltp.push_back(i);
  return node;
}

TEST(PublishIndicator, Examples) {
  const FeeController c{0.8, 15.0};
  auto empty = node_with(0, 10.0);
  const auto a = publish_indicator(empty, c, 1.0);
  EXPECT_DOUBLE_EQ(a.expected_delay, 0.0);
  EXPECT_DOUBLE_EQ(a.fee, 0.0);

  auto mid = node_with(100, 10.0);
  const auto b = publish_indicator(mid, c, 2.0);
  EXPECT_DOUBLE_EQ(b.expected_delay, 10.0);
  EXPECT_DOUBLE_EQ(b.fee, 0.0);

  auto busy = node_with(200, 10.0);
  const auto d = publish_indicator(busy, c, 3.0);
  EXPECT_DOUBLE_EQ(d.expected_delay, 20.0);
  EXPECT_DOUBLE_EQ(d.fee, 4.0);
  EXPECT_DOUBLE_EQ(d.published_at, 3.0);
  EXPECT_EQ(busy.indicator, d);
}

TEST(PublishIndicator, CountsScheduledEntriesAndPrefersFilteredRate) {
  const FeeController c{0.8, 15.0};
  auto node = node_with(30, 10.0);
  node.filter = SawtoothFilter(5, 10.0);
  node.filter.observe(4.0, RateEvent::kDecrease);
  node.filter.observe(6.0, RateEvent::kIncrease);
  node.filter.observe(4.2, RateEvent::kDecrease);  // cycle [4, 6] -> 5
  const auto ind = publish_indicator(node, c, 0.0, 20);
  EXPECT_DOUBLE_EQ(ind.expected_delay, 50.0 / 5.0);
}

}  // namespace
}  // namespace ledgersim
