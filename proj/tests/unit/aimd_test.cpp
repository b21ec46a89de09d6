#include <gtest/gtest.h>

#include "ledgersim/aimd.hpp"
#include "ledgersim/rng.hpp"

namespace ledgersim {
namespace {

AimdState state_at(double rate) {
  AimdState s;
  s.current_rate = rate;
  s.additive_step = 0.1;
  s.decrease_factor = 0.7;
  s.rate_floor = 0.05;
  s.rate_cap = 50.0;
  s.decrease_cooldown = 0.1;
  return s;
}

TEST(Aimd, AdditiveIncrease) {
  const auto out = aimd_tick(state_at(2.0), false, 1.0);
  EXPECT_DOUBLE_EQ(out.state.current_rate, 2.1);
  EXPECT_EQ(out.event, AimdEvent::kIncrease);
  EXPECT_DOUBLE_EQ(out.previous_rate, 2.0);
}

TEST(Aimd, MultiplicativeDecrease) {
  const auto out = aimd_tick(state_at(2.0), true, 1.0);
  EXPECT_DOUBLE_EQ(out.state.current_rate, 1.4);
  EXPECT_EQ(out.event, AimdEvent::kDecrease);
  EXPECT_DOUBLE_EQ(out.state.last_decrease_at, 1.0);
}

TEST(Aimd, FloorClamp) {
  const auto out = aimd_tick(state_at(0.05), true, 1.0);
  EXPECT_DOUBLE_EQ(out.state.current_rate, 0.05);
}

TEST(Aimd, CapClamp) {
  const auto near = aimd_tick(state_at(49.95), false, 1.0);
  EXPECT_DOUBLE_EQ(near.state.current_rate, 50.0);
  const auto at = aimd_tick(state_at(50.0), false, 1.0);
  EXPECT_DOUBLE_EQ(at.state.current_rate, 50.0);
  EXPECT_EQ(at.event, AimdEvent::kHold);
}

TEST(Aimd, CooldownHoldsRate) {
  auto s = state_at(2.0);
  s.last_decrease_at = 0.95;
  const auto held = aimd_tick(s, true, 1.0);
  EXPECT_EQ(held.event, AimdEvent::kHold);
  EXPECT_DOUBLE_EQ(held.state.current_rate, 2.0);
  // Exactly one cooldown later, even with tick-time rounding.
  s.last_decrease_at = 0.1 * 9;
  const auto cut = aimd_tick(s, true, 0.1 * 10);
  EXPECT_EQ(cut.event, AimdEvent::kDecrease);
}

TEST(Aimd, SawtoothShapeOnRandomCongestion) {
  Rng rng(3);
  auto s = state_at(5.0);
  double rate_before = s.current_rate;
  for (int k = 1; k <= 20000; ++k) {
    const bool congested = rng.uniform() < 0.3;
    const auto out = aimd_tick(s, congested, 0.1 * k);
    if (out.event == AimdEvent::kDecrease) {
      const double expected = std::max(rate_before * 0.7, 0.05);
      ASSERT_DOUBLE_EQ(out.state.current_rate, expected);
    } else {
      ASSERT_GE(out.state.current_rate, rate_before);
    }
    ASSERT_GE(out.state.current_rate, 0.05);
    ASSERT_LE(out.state.current_rate, 50.0);
    s = out.state;
    rate_before = s.current_rate;
  }
}

}  // namespace
}  // namespace ledgersim
