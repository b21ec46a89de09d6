#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ledgersim {

enum class Policy { kUrns, kRbns, kDbns, kDbnsPlus };

enum class Scenario { kA90, kB98, kC120 };

/// Canonical lowercase names: "urns", "rbns", "dbns", "dbns-plus".
std::string_view policy_name(Policy policy);
/// Throws ConfigError listing the valid names.
Policy parse_policy(std::string_view name);

/// "a90", "b98", "c120".
std::string_view scenario_name(Scenario scenario);
Scenario parse_scenario(std::string_view name);
/// 0.90, 0.98, 1.20.
double scenario_load_fraction(Scenario scenario);

inline constexpr Policy kAllPolicies[] = {Policy::kUrns, Policy::kRbns,
                                          Policy::kDbns, Policy::kDbnsPlus};

struct AimdParams {
  bool enabled = true;
  // Additive step per update, multiplied by the node's reputation.
  double additive_step = 0.02;
  double decrease_factor = 0.7;
  double update_interval = 0.1;
  double rate_floor = 0.05;
  // Minimum time between two multiplicative decreases.
  double decrease_cooldown = 2.0;
  // Scheduler inbox length above which a node is congested.
  double backlog_threshold = 50.0;
  // Multiply the threshold by rep_i / max(rep).
  bool scale_threshold_by_reputation = true;
  // Let rate setters of nodes with nothing pending keep growing.
  bool idle_growth = false;
  // Starting issue rate. Unset means the node's fair share of capacity.
  std::optional<double> initial_rate;
};

struct ControllerParams {
  double gain = 0.8;
  double setpoint = 15.0;
  std::size_t filter_window = 5;
};

struct UserOverride {
  std::size_t user_id = 0;
  std::optional<double> send_rate;
  std::optional<double> tradeoff_weight;
  std::optional<double> cost_threshold;
};

struct UserParams {
  double tradeoff_weight = 0.6;
  double cost_threshold = 10.0;
  std::vector<UserOverride> overrides;
};

struct NetworkConfig {
  // network
  std::size_t node_count = 50;
  std::size_t user_count = 100;
  double scheduling_rate = 50.0;
  std::size_t neighbour_degree = 4;
  double zipf_exponent = 0.9;

  // scenario
  double load_fraction = 0.9;
  Policy policy = Policy::kUrns;

  // simulation
  double duration = 2000.0;
  double warmup = 100.0;
  std::size_t mc_runs = 10;
  std::uint64_t rng_seed = 1;
  double qos_publish_interval = 0.05;
  double metrics_interval = 1.0;
  // Minimum delay/cost used before inverting in DBNS and DBNS+.
  double min_delay = 0.01;

  // output
  double histogram_bin_width = 1.0;

  AimdParams aimd;
  ControllerParams controller;
  UserParams users;
};

/// Every violated constraint, one message per entry. Empty means valid.
std::vector<std::string> validate(const NetworkConfig& config);

/// Throws ConfigError carrying all messages from validate().
void require_valid(const NetworkConfig& config);

/// Parses a JSON configuration document. Missing keys keep their defaults;
/// unknown keys and type mismatches raise ConfigError naming the key.
/// The result is validated.
NetworkConfig parse_config(std::string_view json_text);

NetworkConfig load_config(const std::filesystem::path& path);

/// Canonical JSON rendering (sorted keys). parse_config() accepts it back.
std::string config_to_json(const NetworkConfig& config, int indent = 2);

/// FNV-1a over the compact canonical JSON rendering.
std::uint64_t config_hash(const NetworkConfig& config);

}  // namespace ledgersim
