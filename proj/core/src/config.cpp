#include "ledgersim/config.hpp"

#include <cmath>
#include <concepts>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ledgersim/errors.hpp"

namespace ledgersim {
namespace {

using nlohmann::json;

constexpr std::string_view kPolicyNames[] = {"urns", "rbns", "dbns",
                                             "dbns-plus"};
constexpr std::string_view kScenarioNames[] = {"a90", "b98", "c120"};

// Reads one JSON object section, rejecting keys it was not asked about.
class Section {
 public:
  Section(const json& node, std::string path,
          std::initializer_list<std::string_view> allowed)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ConfigError("'" + display() + "' must be an object");
    }
    std::set<std::string_view> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : node_.items()) {
      if (!known.count(key)) {
        throw ConfigError("unknown key '" + qualified(key) + "'");
      }
    }
  }

  bool has(std::string_view key) const {
    return node_.contains(std::string(key));
  }

  void read(std::string_view key, double& out) const {
    if (!has(key)) return;
    const json& v = node_.at(std::string(key));
    if (!v.is_number()) throw type_error(key, "a number");
    out = v.get<double>();
  }

  void read(std::string_view key, std::optional<double>& out) const {
    if (!has(key)) return;
    const json& v = node_.at(std::string(key));
    if (v.is_null()) {
      out.reset();
      return;
    }
    if (!v.is_number()) throw type_error(key, "a number or null");
    out = v.get<double>();
  }

  template <std::unsigned_integral T>
  void read(std::string_view key, T& out) const {
    if (!has(key)) return;
    const json& v = node_.at(std::string(key));
    if (!v.is_number_unsigned()) throw type_error(key, "a nonnegative integer");
    out = v.get<T>();
  }

  void read(std::string_view key, bool& out) const {
    if (!has(key)) return;
    const json& v = node_.at(std::string(key));
    if (!v.is_boolean()) throw type_error(key, "a boolean");
    out = v.get<bool>();
  }

  void read(std::string_view key, std::string& out) const {
    if (!has(key)) return;
    const json& v = node_.at(std::string(key));
    if (!v.is_string()) throw type_error(key, "a string");
    out = v.get<std::string>();
  }

  const json& child(std::string_view key) const {
    return node_.at(std::string(key));
  }

  std::string qualified(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  ConfigError type_error(std::string_view key, std::string_view want) const {
    return ConfigError("key '" + qualified(key) + "' must be " +
                       std::string(want));
  }

  const json& node_;
  std::string path_;
};

void read_network(const Section& s, NetworkConfig& c) {
  s.read("node_count", c.node_count);
  s.read("user_count", c.user_count);
  s.read("scheduling_rate", c.scheduling_rate);
  s.read("neighbour_degree", c.neighbour_degree);
  s.read("zipf_exponent", c.zipf_exponent);
}

void read_scenario(const Section& s, NetworkConfig& c) {
  s.read("load_fraction", c.load_fraction);
  if (s.has("policy")) {
    std::string name;
    s.read("policy", name);
    c.policy = parse_policy(name);
  }
}

void read_simulation(const Section& s, NetworkConfig& c) {
  s.read("duration", c.duration);
  s.read("warmup", c.warmup);
  s.read("mc_runs", c.mc_runs);
  s.read("rng_seed", c.rng_seed);
  s.read("qos_publish_interval", c.qos_publish_interval);
  s.read("metrics_interval", c.metrics_interval);
  s.read("min_delay", c.min_delay);
}

void read_aimd(const Section& s, AimdParams& a) {
  s.read("enabled", a.enabled);
  s.read("additive_step", a.additive_step);
  s.read("decrease_factor", a.decrease_factor);
  s.read("update_interval", a.update_interval);
  s.read("rate_floor", a.rate_floor);
  s.read("decrease_cooldown", a.decrease_cooldown);
  s.read("backlog_threshold", a.backlog_threshold);
  s.read("scale_threshold_by_reputation", a.scale_threshold_by_reputation);
  s.read("idle_growth", a.idle_growth);
  s.read("initial_rate", a.initial_rate);
}

void read_controller(const Section& s, ControllerParams& p) {
  s.read("gain", p.gain);
  s.read("setpoint", p.setpoint);
  s.read("filter_window", p.filter_window);
}

void read_users(const Section& s, UserParams& u) {
  s.read("tradeoff_weight", u.tradeoff_weight);
  s.read("cost_threshold", u.cost_threshold);
  if (!s.has("overrides")) return;
  const json& list = s.child("overrides");
  if (!list.is_array()) {
    throw ConfigError("key '" + s.qualified("overrides") +
                      "' must be an array");
  }
  u.overrides.clear();
  for (std::size_t i = 0; i < list.size(); ++i) {
    Section o(list[i], s.qualified("overrides") + "[" + std::to_string(i) + "]",
              {"user_id", "send_rate", "tradeoff_weight", "cost_threshold"});
    if (!o.has("user_id")) {
      throw ConfigError("key '" + o.qualified("user_id") + "' is required");
    }
    UserOverride entry;
    o.read("user_id", entry.user_id);
    o.read("send_rate", entry.send_rate);
    o.read("tradeoff_weight", entry.tradeoff_weight);
    o.read("cost_threshold", entry.cost_threshold);
    u.overrides.push_back(entry);
  }
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json to_json_value(const NetworkConfig& c) {
  json overrides = json::array();
  for (const auto& o : c.users.overrides) {
    json entry = {{"user_id", o.user_id}};
    if (o.send_rate) entry["send_rate"] = *o.send_rate;
    if (o.tradeoff_weight) entry["tradeoff_weight"] = *o.tradeoff_weight;
    if (o.cost_threshold) entry["cost_threshold"] = *o.cost_threshold;
    overrides.push_back(entry);
  }
  return json{
      {"network",
       {{"node_count", c.node_count},
        {"user_count", c.user_count},
        {"scheduling_rate", c.scheduling_rate},
        {"neighbour_degree", c.neighbour_degree},
        {"zipf_exponent", c.zipf_exponent}}},
      {"scenario",
       {{"load_fraction", c.load_fraction},
        {"policy", std::string(policy_name(c.policy))}}},
      {"simulation",
       {{"duration", c.duration},
        {"warmup", c.warmup},
        {"mc_runs", c.mc_runs},
        {"rng_seed", c.rng_seed},
        {"qos_publish_interval", c.qos_publish_interval},
        {"metrics_interval", c.metrics_interval},
        {"min_delay", c.min_delay}}},
      {"output", {{"histogram_bin_width", c.histogram_bin_width}}},
      {"aimd",
       {{"enabled", c.aimd.enabled},
        {"additive_step", c.aimd.additive_step},
        {"decrease_factor", c.aimd.decrease_factor},
        {"update_interval", c.aimd.update_interval},
        {"rate_floor", c.aimd.rate_floor},
        {"decrease_cooldown", c.aimd.decrease_cooldown},
        {"backlog_threshold", c.aimd.backlog_threshold},
        {"scale_threshold_by_reputation",
         c.aimd.scale_threshold_by_reputation},
        {"idle_growth", c.aimd.idle_growth},
        {"initial_rate", optional_to_json(c.aimd.initial_rate)}}},
      {"controller",
       {{"gain", c.controller.gain},
        {"setpoint", c.controller.setpoint},
        {"filter_window", c.controller.filter_window}}},
      {"users",
       {{"tradeoff_weight", c.users.tradeoff_weight},
        {"cost_threshold", c.users.cost_threshold},
        {"overrides", overrides}}},
  };
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::string_view policy_name(Policy policy) {
  return kPolicyNames[static_cast<int>(policy)];
}

Policy parse_policy(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kPolicyNames[i]) return static_cast<Policy>(i);
  }
  throw ConfigError("unknown policy '" + std::string(name) +
                    "' (valid: urns, rbns, dbns, dbns-plus)");
}

std::string_view scenario_name(Scenario scenario) {
  return kScenarioNames[static_cast<int>(scenario)];
}

Scenario parse_scenario(std::string_view name) {
  for (int i = 0; i < 3; ++i) {
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  }
  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (valid: a90, b98, c120)");
}

double scenario_load_fraction(Scenario scenario) {
  switch (scenario) {
    case Scenario::kA90:
      return 0.90;
    case Scenario::kB98:
      return 0.98;
    case Scenario::kC120:
      return 1.20;
  }
  return 0.0;
}

std::vector<std::string> validate(const NetworkConfig& c) {
  std::vector<std::string> errors;
  auto check = [&errors](bool ok, std::string message) {
    if (!ok) errors.push_back(std::move(message));
  };
  check(c.node_count >= 1, "network.node_count must be >= 1");
  check(c.user_count >= 1, "network.user_count must be >= 1");
  check(finite(c.scheduling_rate) && c.scheduling_rate > 0,
        "network.scheduling_rate must be > 0");
  check(finite(c.zipf_exponent) && c.zipf_exponent >= 0,
        "network.zipf_exponent must be >= 0");
  check(finite(c.load_fraction) && c.load_fraction > 0,
        "scenario.load_fraction must be > 0");
  check(finite(c.duration) && c.duration >= 0,
        "simulation.duration must be >= 0");
  check(finite(c.warmup) && c.warmup >= 0, "simulation.warmup must be >= 0");
  check(c.mc_runs >= 1, "simulation.mc_runs must be >= 1");
  check(finite(c.qos_publish_interval) && c.qos_publish_interval > 0,
        "simulation.qos_publish_interval must be > 0");
  check(finite(c.metrics_interval) && c.metrics_interval > 0,
        "simulation.metrics_interval must be > 0");
  check(finite(c.min_delay) && c.min_delay > 0,
        "simulation.min_delay must be > 0");
  check(finite(c.histogram_bin_width) && c.histogram_bin_width > 0,
        "output.histogram_bin_width must be > 0");

  const auto& a = c.aimd;
  check(finite(a.additive_step) && a.additive_step >= 0,
        "aimd.additive_step must be >= 0");
  check(a.decrease_factor > 0 && a.decrease_factor < 1,
        "aimd.decrease_factor must be in (0, 1)");
  check(finite(a.update_interval) && a.update_interval > 0,
        "aimd.update_interval must be > 0");
  check(finite(a.rate_floor) && a.rate_floor > 0,
        "aimd.rate_floor must be > 0");
  check(a.rate_floor <= c.scheduling_rate,
        "aimd.rate_floor must not exceed network.scheduling_rate");
  check(finite(a.decrease_cooldown) && a.decrease_cooldown >= 0,
        "aimd.decrease_cooldown must be >= 0");
  check(finite(a.backlog_threshold) && a.backlog_threshold >= 0,
        "aimd.backlog_threshold must be >= 0");
  if (a.initial_rate) {
    check(finite(*a.initial_rate) && *a.initial_rate >= a.rate_floor &&
              *a.initial_rate <= c.scheduling_rate,
          "aimd.initial_rate must lie in [aimd.rate_floor, "
          "network.scheduling_rate]");
  }

  check(finite(c.controller.gain) && c.controller.gain > 0,
        "controller.gain must be > 0");
  check(finite(c.controller.setpoint) && c.controller.setpoint >= 0,
        "controller.setpoint must be >= 0");
  check(c.controller.filter_window >= 1,
        "controller.filter_window must be >= 1");

  const auto& u = c.users;
  check(u.tradeoff_weight >= 0 && u.tradeoff_weight <= 1,
        "users.tradeoff_weight must be in [0, 1]");
  check(finite(u.cost_threshold) && u.cost_threshold >= 0,
        "users.cost_threshold must be >= 0");
  for (std::size_t i = 0; i < u.overrides.size(); ++i) {
    const auto& o = u.overrides[i];
    const std::string where = "users.overrides[" + std::to_string(i) + "]";
    check(o.user_id < c.user_count, where + ".user_id out of range");
    if (o.send_rate) {
      check(finite(*o.send_rate) && *o.send_rate > 0,
            where + ".send_rate must be > 0");
    }
    if (o.tradeoff_weight) {
      check(*o.tradeoff_weight >= 0 && *o.tradeoff_weight <= 1,
            where + ".tradeoff_weight must be in [0, 1]");
    }
    if (o.cost_threshold) {
      check(finite(*o.cost_threshold) && *o.cost_threshold >= 0,
            where + ".cost_threshold must be >= 0");
    }
  }
  return errors;
}

void require_valid(const NetworkConfig& config) {
  const auto errors = validate(config);
  if (errors.empty()) return;
  std::string message = "invalid configuration:";
  for (const auto& e : errors) message += "\n  " + e;
  throw ConfigError(message);
}

NetworkConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  Section top(root, "",
              {"network", "scenario", "simulation", "output", "aimd",
               "controller", "users"});
  NetworkConfig config;
  if (top.has("network")) {
    read_network(Section(top.child("network"), "network",
                         {"node_count", "user_count", "scheduling_rate",
                          "neighbour_degree", "zipf_exponent"}),
                 config);
  }
  if (top.has("scenario")) {
    read_scenario(Section(top.child("scenario"), "scenario",
                          {"load_fraction", "policy"}),
                  config);
  }
  if (top.has("simulation")) {
    read_simulation(
        Section(top.child("simulation"), "simulation",
                {"duration", "warmup", "mc_runs", "rng_seed",
                 "qos_publish_interval", "metrics_interval", "min_delay"}),
        config);
  }
  if (top.has("output")) {
    Section(top.child("output"), "output", {"histogram_bin_width"})
        .read("histogram_bin_width", config.histogram_bin_width);
  }
  if (top.has("aimd")) {
    read_aimd(Section(top.child("aimd"), "aimd",
                      {"enabled", "additive_step", "decrease_factor",
                       "update_interval", "rate_floor", "decrease_cooldown",
                       "backlog_threshold", "scale_threshold_by_reputation",
                       "idle_growth", "initial_rate"}),
              config.aimd);
  }
  if (top.has("controller")) {
    read_controller(Section(top.child("controller"), "controller",
                            {"gain", "setpoint", "filter_window"}),
                    config.controller);
  }
  if (top.has("users")) {
    read_users(Section(top.child("users"), "users",
                       {"tradeoff_weight", "cost_threshold", "overrides"}),
               config.users);
  }
  require_valid(config);
  return config;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open configuration file '" + path.string() + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const NetworkConfig& config, int indent) {
  return to_json_value(config).dump(indent);
}

std::uint64_t config_hash(const NetworkConfig& config) {
  const std::string text = to_json_value(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ledgersim
