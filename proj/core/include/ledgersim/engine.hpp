#pragma once

#include <cstddef>
#include <cstdint>
#include <queue>
#include <span>
#include <vector>

#include "ledgersim/config.hpp"
#include "ledgersim/model.hpp"

namespace ledgersim {

enum class EventKind : std::uint8_t {
  kUserArrival,
  kNodeIssue,
  kSchedulerService,
  kAimdUpdate,
  kQosPublish,
  kMetricsSample,
};

struct Event {
  SimTime time = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::kMetricsSample;
  // User or node index for the per-actor kinds.
  std::size_t actor = 0;
  // Lets a node invalidate a pending issue event after a rate change.
  std::uint64_t generation = 0;
};

/// Min-queue on (time, sequence). Sequence numbers are assigned on push, so
/// equal-time events pop in insertion order.
class EventQueue {
 public:
  void push(SimTime time, EventKind kind, std::size_t actor = 0,
            std::uint64_t generation = 0);
  Event pop();
  const Event& top() const { return heap_.top(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
};

struct TxRecord {
  TxId id = 0;
  UserId user = 0;
  NodeId node = 0;
  SimTime created_at = 0.0;
  SimTime enqueued_at = 0.0;
  SimTime issued_at = 0.0;
  double fee_paid = 0.0;

  double delay() const noexcept { return issued_at - enqueued_at; }
  friend bool operator==(const TxRecord&, const TxRecord&) = default;
};

struct NodeSample {
  SimTime time = 0.0;
  NodeId node = 0;
  std::size_t ltp_length = 0;
  std::size_t inbox_length = 0;
  double issue_rate = 0.0;
  double filtered_rate = 0.0;
  double advertised_delay = 0.0;
  double fee = 0.0;
  // When the advertised values were last published.
  SimTime published_at = 0.0;
  double reputation = 0.0;
};

/// User activity in the sampling interval ending at `time`.
struct DemandSample {
  SimTime time = 0.0;
  std::uint64_t created = 0;
  std::uint64_t sent = 0;
};

/// Transaction accounting snapshot; created = issued + in_ltp +
/// in_scheduler + deferred holds at every sample.
struct ConservationSample {
  SimTime time = 0.0;
  std::uint64_t created = 0;
  std::uint64_t issued = 0;
  std::uint64_t in_ltp = 0;
  std::uint64_t in_scheduler = 0;
  std::uint64_t deferred = 0;
};

struct SimResult {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  Policy policy = Policy::kUrns;
  double load_fraction = 0.0;
  double scheduling_rate = 0.0;
  double duration = 0.0;
  double warmup = 0.0;
  double metrics_interval = 1.0;
  std::vector<double> reputation;

  // Issued transactions in id order.
  std::vector<TxRecord> transactions;
  std::vector<NodeSample> node_series;
  std::vector<DemandSample> demand;
  std::vector<ConservationSample> conservation;

  // Transactions enqueued at each node at or after the warm-up.
  std::vector<std::uint64_t> received_after_warmup;
  std::vector<double> fees_per_node;

  std::uint64_t created = 0;
  std::uint64_t sent = 0;
  std::uint64_t issued = 0;
  // Failed DBNS+ send attempts.
  std::uint64_t deferral_events = 0;
  // Distinct transactions held back at least once.
  std::uint64_t deferred_transactions = 0;
  std::uint64_t deferred_at_end = 0;
  std::uint64_t in_ltp_at_end = 0;
  std::uint64_t in_scheduler_at_end = 0;
};

/// Runs one seeded simulation for config.duration seconds. Identical
/// (config, seed) pairs give identical results. Throws ConfigError for an
/// invalid config before any event runs.
SimResult run(const NetworkConfig& config, std::uint64_t seed);

/// One run per seed, in seed order. Runs may execute concurrently.
std::vector<SimResult> run_batch(const NetworkConfig& config,
                                 std::span<const std::uint64_t> seeds);

/// Sets the scenario's load fraction and runs seeds rng_seed + 0 ..
/// rng_seed + mc_runs - 1.
std::vector<SimResult> run_scenario(NetworkConfig config, Scenario scenario);

}  // namespace ledgersim
