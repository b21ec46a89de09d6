#include "ledgersim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ledgersim/aimd.hpp"
#include "ledgersim/drr.hpp"
#include "ledgersim/errors.hpp"
#include "ledgersim/policies.hpp"
#include "ledgersim/qos.hpp"
#include "ledgersim/rng.hpp"
#include "ledgersim/state.hpp"

namespace ledgersim {

void EventQueue::push(SimTime time, EventKind kind, std::size_t actor,
                      std::uint64_t generation) {
  heap_.push(Event{time, next_sequence_++, kind, actor, generation});
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  return e;
}

namespace {

class Simulation {
 public:
  Simulation(const NetworkConfig& config, std::uint64_t seed)
      : config_(config),
        seed_(seed),
        reputation_(generate_reputation(config.node_count,
                                        config.zipf_exponent)),
        scheduler_(config.scheduling_rate, reputation_),
        fee_controller_{config.controller.gain, config.controller.setpoint},
        indicators_(config.node_count),
        issue_armed_(config.node_count, false),
        issue_generation_(config.node_count, 0) {
    init_nodes();
    init_users();
    result_.seed = seed;
    result_.config_hash = config_hash(config);
    result_.policy = config.policy;
    result_.load_fraction = config.load_fraction;
    result_.scheduling_rate = config.scheduling_rate;
    result_.duration = config.duration;
    result_.warmup = config.warmup;
    result_.metrics_interval = config.metrics_interval;
    result_.reputation.assign(reputation_.values().begin(),
                              reputation_.values().end());
    result_.received_after_warmup.assign(config.node_count, 0);
  }

  SimResult run() {
    queue_.push(0.0, EventKind::kQosPublish);
    if (config_.aimd.enabled) {
      queue_.push(config_.aimd.update_interval, EventKind::kAimdUpdate);
    }
    queue_.push(config_.metrics_interval, EventKind::kMetricsSample);
    for (auto& user : users_) schedule_arrival(user);

    while (!queue_.empty() && queue_.top().time <= config_.duration) {
      const Event event = queue_.pop();
      now_ = event.time;
      dispatch(event);
    }
    finish();
    return std::move(result_);
  }

 private:
  void init_nodes() {
    const std::size_t n = config_.node_count;
    const auto& a = config_.aimd;
    nodes_.resize(n);
    node_rngs_.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
      NodeState& node = nodes_[i];
      node.id = i;
      node.reputation = reputation_[i];
      const double fair_share =
          config_.scheduling_rate * reputation_[i] / reputation_.total();
      const double initial = std::clamp(a.initial_rate.value_or(fair_share),
                                        a.rate_floor, config_.scheduling_rate);
      node.aimd.current_rate = initial;
      node.aimd.additive_step = a.additive_step * reputation_[i];
      node.aimd.decrease_factor = a.decrease_factor;
      node.aimd.update_interval = a.update_interval;
      node.aimd.rate_floor = a.rate_floor;
      node.aimd.rate_cap = config_.scheduling_rate;
      node.aimd.decrease_cooldown = a.decrease_cooldown;
      node.filter = SawtoothFilter(config_.controller.filter_window, initial);
      node_rngs_.emplace_back(seed_, StreamKind::kNode, i);
      thresholds_.push_back(a.scale_threshold_by_reputation
                                ? a.backlog_threshold * reputation_[i] /
                                      reputation_.max()
                                : a.backlog_threshold);
    }
  }

  void init_users() {
    const std::size_t m = config_.user_count;
    const double base_rate =
        config_.load_fraction * config_.scheduling_rate / static_cast<double>(m);
    users_.resize(m);
    user_rngs_.reserve(m);
    Probabilities fixed;
    if (config_.policy == Policy::kUrns) {
      fixed = urns_probabilities(config_.node_count);
    } else if (config_.policy == Policy::kRbns) {
      fixed = rbns_probabilities(reputation_);
    }
    for (UserId u = 0; u < m; ++u) {
      UserState& user = users_[u];
      user.id = u;
      user.send_rate = base_rate;
      user.tradeoff_weight = config_.users.tradeoff_weight;
      user.cost_threshold = config_.users.cost_threshold;
      user.probabilities = fixed;
      user_rngs_.emplace_back(seed_, StreamKind::kUser, u);
    }
    for (const auto& o : config_.users.overrides) {
      UserState& user = users_.at(o.user_id);
      if (o.send_rate) user.send_rate = *o.send_rate;
      if (o.tradeoff_weight) user.tradeoff_weight = *o.tradeoff_weight;
      if (o.cost_threshold) user.cost_threshold = *o.cost_threshold;
    }
  }

  void dispatch(const Event& event) {
    switch (event.kind) {
      case EventKind::kUserArrival:
        on_user_arrival(event.actor);
        break;
      case EventKind::kNodeIssue:
        on_node_issue(event.actor, event.generation);
        break;
      case EventKind::kSchedulerService:
        on_scheduler_service();
        break;
      case EventKind::kAimdUpdate:
        on_aimd_update();
        break;
      case EventKind::kQosPublish:
        on_qos_publish();
        break;
      case EventKind::kMetricsSample:
        on_metrics_sample();
        break;
    }
  }

  void schedule_arrival(const UserState& user) {
    const double dt = user_rngs_[user.id].exponential(user.send_rate);
    queue_.push(now_ + dt, EventKind::kUserArrival, user.id);
  }

  void on_user_arrival(UserId u) {
    UserState& user = users_[u];
    const TxId id = transactions_.size();
    Transaction tx;
    tx.id = id;
    tx.user = u;
    tx.created_at = now_;
    transactions_.push_back(tx);
    ++result_.created;
    ++interval_created_;

    if (config_.policy == Policy::kDbnsPlus) {
      // One send attempt per arrival instant, oldest held transaction first.
      user.deferred.push_back(id);
      const TxId head = user.deferred.front();
      bool sent = false;
      if (auto node = select_dbns_plus(user)) {
        user.deferred.pop_front();
        send(head, *node);
        sent = true;
      } else {
        ++result_.deferral_events;
      }
      if (!(sent && head == id)) ++result_.deferred_transactions;
    } else {
      send(id, select_open_or_dbns(user));
    }
    schedule_arrival(user);
  }

  NodeId select_open_or_dbns(UserState& user) {
    Rng& rng = user_rngs_[user.id];
    if (config_.policy == Policy::kDbns) {
      delays_scratch_.resize(indicators_.size());
      for (std::size_t j = 0; j < indicators_.size(); ++j) {
        delays_scratch_[j] = indicators_[j].expected_delay;
      }
      const auto p =
          dbns_probabilities(reputation_, delays_scratch_, config_.min_delay);
      return sample_node(p, rng);
    }
    return sample_node(user.probabilities, rng);
  }

  std::optional<NodeId> select_dbns_plus(UserState& user) {
    const PolicyInput input{reputation_, indicators_, user.tradeoff_weight,
                            user.cost_threshold, config_.min_delay};
    return dbns_plus_select(input, user_rngs_[user.id]);
  }

  void send(TxId id, NodeId node_id) {
    Transaction& tx = transactions_[id];
    NodeState& node = nodes_[node_id];
    tx.node = node_id;
    tx.enqueued_at = now_;
    tx.fee_paid = indicators_[node_id].fee;
    node.cumulative_fees += tx.fee_paid;
    node.ltp.push_back(id);
    ++result_.sent;
    ++interval_sent_;
    if (now_ >= config_.warmup) ++result_.received_after_warmup[node_id];
    if (!issue_armed_[node_id]) arm_issue(node_id);
  }

  // Memoryless issue timer: resampling after a rate change is exact.
  void arm_issue(NodeId i) {
    issue_armed_[i] = true;
    const double dt = node_rngs_[i].exponential(nodes_[i].issue_rate());
    queue_.push(now_ + dt, EventKind::kNodeIssue, i, ++issue_generation_[i]);
  }

  void on_node_issue(NodeId i, std::uint64_t generation) {
    if (generation != issue_generation_[i]) return;
    issue_armed_[i] = false;
    NodeState& node = nodes_[i];
    if (node.ltp.empty()) return;
    scheduler_.enqueue(i, node.ltp.front());
    node.ltp.pop_front();
    wake_scheduler();
    if (!node.ltp.empty()) arm_issue(i);
  }

  void wake_scheduler() {
    if (scheduler_busy_) return;
    scheduler_busy_ = true;
    const double slot = 1.0 / config_.scheduling_rate;
    queue_.push(std::max(now_, last_service_ + slot),
                EventKind::kSchedulerService);
  }

  void on_scheduler_service() {
    const auto served = scheduler_.service_step(now_, 1);
    if (served.empty()) {
      scheduler_busy_ = false;
      return;
    }
    for (const auto& s : served) {
      transactions_[s.tx].issued_at = s.issued_at;
      ++result_.issued;
    }
    last_service_ = now_;
    if (scheduler_.empty()) {
      scheduler_busy_ = false;
    } else {
      queue_.push(now_ + 1.0 / config_.scheduling_rate,
                  EventKind::kSchedulerService);
    }
  }

  void on_aimd_update() {
    for (NodeState& node : nodes_) {
      // Rate setters only move while the node has work to issue.
      if (!config_.aimd.idle_growth && node.ltp.empty() &&
          scheduler_.inbox_length(node.id) == 0) {
        continue;
      }
      const bool congested =
          congestion_signal(scheduler_, node.id, thresholds_[node.id]);
      const auto outcome = aimd_tick(node.aimd, congested, now_);
      node.aimd = outcome.state;
      if (outcome.event == AimdEvent::kHold) continue;
      node.filter.observe(node.aimd.current_rate,
                          outcome.event == AimdEvent::kDecrease
                              ? RateEvent::kDecrease
                              : RateEvent::kIncrease);
      if (issue_armed_[node.id]) arm_issue(node.id);
    }
    ++aimd_ticks_;
    queue_.push(static_cast<double>(aimd_ticks_ + 1) *
                    config_.aimd.update_interval,
                EventKind::kAimdUpdate);
  }

  void on_qos_publish() {
    for (NodeState& node : nodes_) {
      indicators_[node.id] = publish_indicator(
          node, fee_controller_, now_, scheduler_.inbox_length(node.id));
    }
    ++publish_ticks_;
    queue_.push(static_cast<double>(publish_ticks_) *
                    config_.qos_publish_interval,
                EventKind::kQosPublish);
  }

  void on_metrics_sample() {
    std::uint64_t in_ltp = 0;
    for (const NodeState& node : nodes_) {
      NodeSample s;
      s.time = now_;
      s.node = node.id;
      s.ltp_length = node.ltp.size();
      s.inbox_length = scheduler_.inbox_length(node.id);
      s.issue_rate = node.issue_rate();
      s.filtered_rate = node.rate_estimate();
      s.advertised_delay = node.indicator.expected_delay;
      s.fee = node.indicator.fee;
      s.published_at = node.indicator.published_at;
      s.reputation = node.reputation;
      result_.node_series.push_back(s);
      in_ltp += node.ltp.size();
    }
    result_.demand.push_back({now_, interval_created_, interval_sent_});
    interval_created_ = 0;
    interval_sent_ = 0;
    result_.conservation.push_back({now_, result_.created, result_.issued,
                                    in_ltp, scheduler_.backlog(),
                                    deferred_count()});
    ++metrics_ticks_;
    queue_.push(static_cast<double>(metrics_ticks_ + 1) *
                    config_.metrics_interval,
                EventKind::kMetricsSample);
  }

  std::uint64_t deferred_count() const {
    std::uint64_t total = 0;
    for (const auto& user : users_) total += user.deferred.size();
    return total;
  }

  void finish() {
    result_.transactions.reserve(result_.issued);
    for (const Transaction& tx : transactions_) {
      if (!tx.issued_at) continue;
      result_.transactions.push_back({tx.id, tx.user, *tx.node, tx.created_at,
                                      *tx.enqueued_at, *tx.issued_at,
                                      tx.fee_paid});
    }
    result_.fees_per_node.reserve(nodes_.size());
    for (const NodeState& node : nodes_) {
      result_.fees_per_node.push_back(node.cumulative_fees);
      result_.in_ltp_at_end += node.ltp.size();
    }
    result_.in_scheduler_at_end = scheduler_.backlog();
    result_.deferred_at_end = deferred_count();
  }

  const NetworkConfig& config_;
  std::uint64_t seed_;
  ReputationVector reputation_;
  DrrScheduler scheduler_;
  FeeController fee_controller_;
  std::vector<NodeState> nodes_;
  std::vector<UserState> users_;
  std::vector<Rng> node_rngs_;
  std::vector<Rng> user_rngs_;
  std::vector<QosIndicator> indicators_;
  std::vector<double> thresholds_;
  std::vector<bool> issue_armed_;
  std::vector<std::uint64_t> issue_generation_;
  std::vector<Transaction> transactions_;
  std::vector<double> delays_scratch_;
  EventQueue queue_;
  SimTime now_ = 0.0;
  bool scheduler_busy_ = false;
  SimTime last_service_ = -std::numeric_limits<double>::infinity();
  std::uint64_t aimd_ticks_ = 0;
  std::uint64_t publish_ticks_ = 0;
  std::uint64_t metrics_ticks_ = 0;
  std::uint64_t interval_created_ = 0;
  std::uint64_t interval_sent_ = 0;
  SimResult result_;
};

}  // namespace

SimResult run(const NetworkConfig& config, std::uint64_t seed) {
  require_valid(config);
  return Simulation(config, seed).run();
}

std::vector<SimResult> run_batch(const NetworkConfig& config,
                                 std::span<const std::uint64_t> seeds) {
  require_valid(config);
  std::vector<SimResult> results(seeds.size());
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::max<std::size_t>(seeds.size(), 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < seeds.size(); k = next++) {
      try {
        results[k] = run(config, seeds[k]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<SimResult> run_scenario(NetworkConfig config, Scenario scenario) {
  config.load_fraction = scenario_load_fraction(scenario);
  std::vector<std::uint64_t> seeds(config.mc_runs);
  for (std::size_t k = 0; k < seeds.size(); ++k) seeds[k] = config.rng_seed + k;
  return run_batch(config, seeds);
}

}  // namespace ledgersim
