#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ledgersim/engine.hpp"

namespace ledgersim {

/// Counts over [k*w, (k+1)*w) bins starting at 0.
struct DelayHistogram {
  double bin_width = 1.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  double max_delay = 0.0;

  /// counts / (total * bin_width); integrates to 1 when total > 0.
  std::vector<double> density() const;
  /// Centre of the fullest bin (lowest on ties).
  std::optional<double> mode() const;
};

DelayHistogram compute_histogram(std::span<const double> delays,
                                 double bin_width);

double mean(std::span<const double> xs);
/// Population variance.
double variance(std::span<const double> xs);
/// Linear interpolation between closest ranks; `sorted` must be ascending.
double percentile(std::span<const double> sorted, double q);
/// Rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Delays of transactions enqueued at or after the run's warm-up.
std::vector<double> post_warmup_delays(const SimResult& result);

struct NodeSummary {
  NodeId node = 0;
  double reputation = 0.0;
  std::uint64_t transactions = 0;
  // NaN when the node issued nothing after warm-up.
  double mean_delay = 0.0;
  double traffic_share = 0.0;
  double fees = 0.0;
};

struct SummaryStats {
  std::string policy;
  double load_fraction = 0.0;
  std::size_t runs = 0;
  std::uint64_t transactions = 0;
  double mean_delay = 0.0;
  double delay_variance = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double deferred_fraction = 0.0;
  double demand_rate = 0.0;
  double throughput = 0.0;
  std::vector<NodeSummary> nodes;
};

/// Pools post-warm-up statistics over runs of one (policy, load) cell.
SummaryStats summarize(std::span<const SimResult> runs);

}  // namespace ledgersim
