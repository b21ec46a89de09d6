#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ledgersim/config.hpp"
#include "ledgersim/engine.hpp"
#include "ledgersim/errors.hpp"
#include "ledgersim/export.hpp"
#include "ledgersim/stats.hpp"

namespace ledgersim {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<double> duration;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--scenario", o.scenario, "Load scenario: a90, b98, c120");
  cmd->add_option("--seed", o.seed, "First seed (runs use seed .. seed+runs-1)");
  cmd->add_option("--runs", o.runs, "Monte Carlo runs");
  cmd->add_option("--duration", o.duration, "Simulated seconds per run");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

NetworkConfig resolve_config(const CommonOptions& o) {
  NetworkConfig config =
      o.config_path.empty() ? NetworkConfig{} : load_config(o.config_path);
  if (!o.scenario.empty()) {
    config.load_fraction = scenario_load_fraction(parse_scenario(o.scenario));
  }
  if (o.seed) config.rng_seed = *o.seed;
  if (o.runs) config.mc_runs = *o.runs;
  if (o.duration) config.duration = *o.duration;
  require_valid(config);
  return config;
}

fs::path resolve_out_dir(const CommonOptions& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "ledgersim_out";
}

std::vector<std::uint64_t> seeds_for(const NetworkConfig& config) {
  std::vector<std::uint64_t> seeds(config.mc_runs);
  for (std::size_t k = 0; k < seeds.size(); ++k) seeds[k] = config.rng_seed + k;
  return seeds;
}

int do_run(const CommonOptions& o, const std::string& policy,
           std::ostream& out) {
  NetworkConfig config = resolve_config(o);
  if (!policy.empty()) config.policy = parse_policy(policy);
  const auto results = run_batch(config, seeds_for(config));
  const fs::path dir = resolve_out_dir(o);
  export_results(results, config, dir);
  const SummaryStats summary = summarize(results);
  out << comparison_table(std::span(&summary, 1));
  out << "wrote " << results.size() << " run(s) to " << dir.string() << '\n';
  return kExitOk;
}

int do_compare(const CommonOptions& o, std::ostream& out) {
  const NetworkConfig base = resolve_config(o);
  const auto seeds = seeds_for(base);
  std::vector<SummaryStats> summaries;
  const bool write = !o.out_dir.empty() || std::getenv(kOutDirEnv);
  const fs::path dir = resolve_out_dir(o);
  for (Policy policy : kAllPolicies) {
    NetworkConfig config = base;
    config.policy = policy;
    const auto results = run_batch(config, seeds);
    summaries.push_back(summarize(results));
    if (write) export_results(results, config, dir / policy_name(policy));
  }
  out << comparison_table(summaries);
  if (write) {
    const auto path = dir / "compare.csv";
    std::ofstream csv(path);
    if (!csv) throw IoError("cannot write '" + path.string() + "'");
    write_comparison_csv(csv, summaries);
  }
  return kExitOk;
}

int do_validate(const std::string& path, std::ostream& out) {
  const NetworkConfig config = load_config(path);
  out << config_to_json(config) << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Discrete-event simulator of user-node selection policies for "
               "DAG-based ledgers"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string policy;
  auto* run_cmd = app.add_subcommand("run", "Run one policy and export results");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--policy", policy, "urns, rbns, dbns or dbns-plus");

  CommonOptions compare_opts;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Run all four policies on one scenario and tabulate them");
  add_common(compare_cmd, compare_opts);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand(
      "validate-config", "Parse a configuration and echo it, or list errors");
  validate_cmd->add_option("--config", validate_path, "JSON configuration file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n'
        << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*run_cmd) return do_run(run_opts, policy, out);
    if (*compare_cmd) return do_compare(compare_opts, out);
    if (*validate_cmd) return do_validate(validate_path, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ledgersim
