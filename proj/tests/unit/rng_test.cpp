#include <set>

#include <gtest/gtest.h>

#include "ledgersim/rng.hpp"

namespace ledgersim {
namespace {

TEST(Rng, DerivedSeedsDifferAcrossKindAndIndex) {
  std::set<std::uint64_t> seen;
  for (auto kind : {StreamKind::kUser, StreamKind::kNode, StreamKind::kAux}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      seen.insert(derive_seed(1, kind, i));
    }
  }
  EXPECT_EQ(seen.size(), 600u);
  EXPECT_NE(derive_seed(1, StreamKind::kUser, 0),
            derive_seed(2, StreamKind::kUser, 0));
}

TEST(Rng, SameStreamSameDraws) {
  Rng a(7, StreamKind::kNode, 3);
  Rng b(7, StreamKind::kNode, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformInHalfOpenUnitInterval) {
  Rng rng(11);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1 - 1e-3);
  EXPECT_NEAR(sum / kDraws, 0.5, 0.005);
}

TEST(Rng, ExponentialMean) {
  Rng rng(5, StreamKind::kAux, 0);
  double sum = 0.0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const double x = rng.exponential(0.5);
    ASSERT_GE(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum / kDraws, 2.0, 0.1);
}

}  // namespace
}  // namespace ledgersim
