#include <numeric>

#include <gtest/gtest.h>

#include "ledgersim/drr.hpp"
#include "ledgersim/rng.hpp"

namespace ledgersim {
namespace {

// Keeps every inbox in `nodes` nonempty and counts service per node.
std::vector<std::size_t> serve_backlogged(DrrScheduler& drr,
                                          const std::vector<NodeId>& nodes,
                                          std::size_t slots, TxId& next_tx) {
  std::vector<std::size_t> served(drr.node_count(), 0);
  for (NodeId n : nodes) {
    while (drr.inbox_length(n) < 2) drr.enqueue(n, next_tx++);
  }
  for (std::size_t s = 0; s < slots; ++s) {
    const auto out = drr.service_step(static_cast<double>(s));
    EXPECT_EQ(out.size(), 1u);
    for (const auto& tx : out) {
      ++served[tx.node];
      drr.enqueue(tx.node, next_tx++);
    }
  }
  return served;
}

TEST(Drr, EmptySchedulerServesNothing) {
  DrrScheduler drr(50.0, ReputationVector({1.0, 2.0}));
  EXPECT_TRUE(drr.service_step(0.0, 5).empty());
  EXPECT_TRUE(drr.empty());
}

TEST(Drr, TwoToOneSharesOverThreeThousandSlots) {
  DrrScheduler drr(50.0, ReputationVector({2.0, 1.0}));
  TxId next = 0;
  const auto served = serve_backlogged(drr, {0, 1}, 3000, next);
  EXPECT_NEAR(static_cast<double>(served[0]), 2000.0, 40.0);
  EXPECT_NEAR(static_cast<double>(served[1]), 1000.0, 20.0);
}

TEST(Drr, LoneBackloggedNodeGetsEverySlot) {
  DrrScheduler drr(50.0, generate_reputation(10, 0.9));
  TxId next = 0;
  const auto served = serve_backlogged(drr, {9}, 500, next);
  EXPECT_EQ(served[9], 500u);
}

TEST(Drr, ServesInFifoOrderWithinNode) {
  DrrScheduler drr(1.0, ReputationVector({1.0}));
  for (TxId t = 0; t < 5; ++t) drr.enqueue(0, t);
  const auto out = drr.service_step(3.0, 5);
  ASSERT_EQ(out.size(), 5u);
  for (TxId t = 0; t < 5; ++t) {
    EXPECT_EQ(out[t].tx, t);
    EXPECT_DOUBLE_EQ(out[t].issued_at, 3.0);
  }
}

TEST(Drr, WorkConservingWhileAnyInboxNonempty) {
  DrrScheduler drr(50.0, generate_reputation(20, 0.9));
  Rng rng(9);
  TxId next = 0;
  for (int step = 0; step < 5000; ++step) {
    if (rng.uniform() < 0.6) {
      drr.enqueue(static_cast<NodeId>(rng.uniform() * 20), next++);
    }
    const std::size_t before = drr.backlog();
    const auto out = drr.service_step(step);
    ASSERT_EQ(out.size(), before > 0 ? 1u : 0u);
    ASSERT_EQ(drr.backlog(), before - out.size());
  }
}

TEST(Drr, FairnessOnRandomBackloggedSets) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 5);
    std::vector<double> reps(n);
    for (double& r : reps) r = 1.0 + 3.0 * rng.uniform();
    DrrScheduler drr(50.0, ReputationVector(reps));
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), 0);
    TxId next = 0;
    // Warm up at a random offset so windows start mid-round.
    serve_backlogged(drr, all, static_cast<std::size_t>(rng.uniform() * 97), next);
    const auto served = serve_backlogged(drr, all, 1000, next);
    const double total = std::accumulate(reps.begin(), reps.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double expected = 1000.0 * reps[i] / total;
      EXPECT_NEAR(served[i], expected, 0.05 * expected)
          << "trial " << trial << " node " << i;
    }
  }
}

TEST(Drr, FairnessAcrossZipfNodes) {
  const auto rep = generate_reputation(50, 0.9);
  DrrScheduler drr(50.0, rep);
  std::vector<NodeId> all(50);
  std::iota(all.begin(), all.end(), 0);
  TxId next = 0;
  const auto served = serve_backlogged(drr, all, 20000, next);
  for (NodeId i = 0; i < 50; ++i) {
    const double expected = 20000.0 * rep[i] / rep.total();
    EXPECT_NEAR(served[i], expected, 0.05 * expected) << "node " << i;
  }
}

TEST(Drr, CongestionSignalIsStrict) {
  DrrScheduler drr(50.0, ReputationVector({1.0}));
  EXPECT_FALSE(congestion_signal(drr, 0, 10));
  for (TxId t = 0; t < 10; ++t) drr.enqueue(0, t);
  EXPECT_FALSE(congestion_signal(drr, 0, 10));
  drr.enqueue(0, 10);
  EXPECT_TRUE(congestion_signal(drr, 0, 10));
}

TEST(Drr, QuantaProportionalToReputation) {
  DrrScheduler drr(50.0, ReputationVector({4.0, 2.0, 1.0}));
  EXPECT_DOUBLE_EQ(drr.quantum(0), 1.0);
  EXPECT_DOUBLE_EQ(drr.quantum(1), 0.5);
  EXPECT_DOUBLE_EQ(drr.quantum(2), 0.25);
}

}  // namespace
}  // namespace ledgersim
