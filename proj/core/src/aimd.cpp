#include "ledgersim/aimd.hpp"

#include <algorithm>

namespace ledgersim {

AimdOutcome aimd_tick(const AimdState& state, bool congested, SimTime now) {
  AimdOutcome out{state, AimdEvent::kHold, state.current_rate};
  AimdState& next = out.state;
  if (!congested) {
    next.current_rate =
        std::min(state.current_rate + state.additive_step, state.rate_cap);
    if (next.current_rate != state.current_rate) {
      out.event = AimdEvent::kIncrease;
    }
    return out;
  }
  // Tolerate accumulated rounding in tick times that are multiples of the
  // update interval.
  constexpr double kSlack = 1e-9;
  if (now - state.last_decrease_at + kSlack >= state.decrease_cooldown) {
    next.current_rate = std::max(state.current_rate * state.decrease_factor,
                                 state.rate_floor);
    next.last_decrease_at = now;
    out.event = AimdEvent::kDecrease;
  }
  return out;
}

}  // namespace ledgersim
