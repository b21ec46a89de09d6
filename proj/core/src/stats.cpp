#include "ledgersim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ledgersim/config.hpp"

namespace ledgersim {

std::vector<double> DelayHistogram::density() const {
  std::vector<double> d(counts.size(), 0.0);
  if (total == 0) return d;
  const double norm = static_cast<double>(total) * bin_width;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    d[k] = static_cast<double>(counts[k]) / norm;
  }
  return d;
}

std::optional<double> DelayHistogram::mode() const {
  if (total == 0) return std::nullopt;
  const auto it = std::max_element(counts.begin(), counts.end());
  const auto k = static_cast<double>(it - counts.begin());
  return (k + 0.5) * bin_width;
}

DelayHistogram compute_histogram(std::span<const double> delays,
                                 double bin_width) {
  DelayHistogram h;
  h.bin_width = bin_width;
  if (delays.empty()) return h;
  h.max_delay = *std::max_element(delays.begin(), delays.end());
  h.counts.assign(static_cast<std::size_t>(h.max_delay / bin_width) + 1, 0);
  for (double d : delays) {
    auto k = static_cast<std::size_t>(d / bin_width);
    // d / w can round up to the bin count for d == max.
    k = std::min(k, h.counts.size() - 1);
    ++h.counts[k];
  }
  h.total = delays.size();
  return h;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size());
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = std::clamp(q, 0.0, 1.0) *
                     static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> post_warmup_delays(const SimResult& result) {
  std::vector<double> delays;
  delays.reserve(result.transactions.size());
  for (const auto& tx : result.transactions) {
    if (tx.enqueued_at >= result.warmup) delays.push_back(tx.delay());
  }
  return delays;
}

SummaryStats summarize(std::span<const SimResult> runs) {
  SummaryStats s;
  s.runs = runs.size();
  if (runs.empty()) return s;
  const auto& first = runs.front();
  s.policy = std::string(policy_name(first.policy));
  s.load_fraction = first.load_fraction;
  const std::size_t n = first.reputation.size();

  std::vector<double> pooled;
  std::vector<double> delay_sum(n, 0.0);
  std::vector<std::uint64_t> delay_count(n, 0);
  std::vector<std::uint64_t> received(n, 0);
  std::vector<double> fees(n, 0.0);
  std::uint64_t created = 0, deferred = 0;
  double run_time = 0.0;
  for (const auto& r : runs) {
    for (const auto& tx : r.transactions) {
      if (tx.enqueued_at < r.warmup) continue;
      pooled.push_back(tx.delay());
      delay_sum[tx.node] += tx.delay();
      ++delay_count[tx.node];
    }
    for (std::size_t i = 0; i < n; ++i) {
      received[i] += r.received_after_warmup[i];
      fees[i] += r.fees_per_node[i];
    }
    created += r.created;
    deferred += r.deferred_transactions;
    run_time += r.duration;
  }

  s.transactions = pooled.size();
  s.mean_delay = mean(pooled);
  s.delay_variance = variance(pooled);
  std::sort(pooled.begin(), pooled.end());
  s.p50 = percentile(pooled, 0.50);
  s.p90 = percentile(pooled, 0.90);
  s.p95 = percentile(pooled, 0.95);
  s.p99 = percentile(pooled, 0.99);
  s.deferred_fraction =
      created ? static_cast<double>(deferred) / static_cast<double>(created)
              : 0.0;
  if (run_time > 0.0) {
    s.demand_rate = static_cast<double>(created) / run_time;
    std::uint64_t issued = 0;
    for (const auto& r : runs) issued += r.issued;
    s.throughput = static_cast<double>(issued) / run_time;
  }

  const double total_received = static_cast<double>(
      std::accumulate(received.begin(), received.end(), std::uint64_t{0}));
  s.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = s.nodes[i];
    node.node = i;
    node.reputation = first.reputation[i];
    node.transactions = delay_count[i];
    node.mean_delay = delay_count[i]
                          ? delay_sum[i] / static_cast<double>(delay_count[i])
                          : std::numeric_limits<double>::quiet_NaN();
    node.traffic_share =
        total_received > 0 ? static_cast<double>(received[i]) / total_received
                           : 0.0;
    node.fees = fees[i] / static_cast<double>(runs.size());
  }
  return s;
}

}  // namespace ledgersim
