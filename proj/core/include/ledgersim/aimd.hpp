#pragma once

#include <limits>

#include "ledgersim/model.hpp"

namespace ledgersim {

/// Rate setter for one node's pool service rate.
struct AimdState {
  double current_rate = 1.0;
  // Already scaled by the node's reputation.
  double additive_step = 0.02;
  double decrease_factor = 0.7;
  double update_interval = 0.1;
  double rate_floor = 0.05;
  double rate_cap = 50.0;
  double decrease_cooldown = 0.1;
  SimTime last_decrease_at = -std::numeric_limits<double>::infinity();
};

enum class AimdEvent { kIncrease, kDecrease, kHold };

struct AimdOutcome {
  AimdState state;
  AimdEvent event = AimdEvent::kHold;
  double previous_rate = 0.0;
};

/// One update of the rate setter. Not congested: rate grows by the additive
/// step, capped at rate_cap. Congested and out of cooldown: rate is
/// multiplied by decrease_factor and floored at rate_floor. Congested inside
/// the cooldown: unchanged.
AimdOutcome aimd_tick(const AimdState& state, bool congested, SimTime now);

}  // namespace ledgersim
