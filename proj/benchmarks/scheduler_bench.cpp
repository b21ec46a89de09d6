#include <benchmark/benchmark.h>

#include "ledgersim/drr.hpp"
#include "ledgersim/model.hpp"

namespace {

using namespace ledgersim;

// Every node permanently backlogged; measures one slot of DRR service.
void BM_DrrBackloggedSlot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto reps = generate_reputation(n, 0.9);
  DrrScheduler scheduler(50.0, reps);
  TxId next = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (int k = 0; k < 4; ++k) scheduler.enqueue(i, next++);
  }
  double now = 0.0;
  for (auto _ : state) {
    auto served = scheduler.service_step(now, 1);
    scheduler.enqueue(served.front().node, next++);
    now += 0.02;
    benchmark::DoNotOptimize(served);
  }
}
BENCHMARK(BM_DrrBackloggedSlot)->Arg(50)->Arg(500);

}  // namespace
