#include "ledgersim/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "ledgersim/errors.hpp"

#ifndef LEDGERSIM_VERSION
#define LEDGERSIM_VERSION "0.0.0"
#endif

namespace ledgersim {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Rounded to six significant digits; NaN becomes null.
json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return std::stod(format_number(value));
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

json summary_value(const SummaryStats& s) {
  json nodes = json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"node_id", n.node},
                     {"reputation", number(n.reputation)},
                     {"transactions", n.transactions},
                     {"mean_delay", number(n.mean_delay)},
                     {"traffic_share", number(n.traffic_share)},
                     {"fees", number(n.fees)}});
  }
  return {{"policy", s.policy},
          {"load_fraction", number(s.load_fraction)},
          {"runs", s.runs},
          {"transactions", s.transactions},
          {"mean_delay", number(s.mean_delay)},
          {"delay_variance", number(s.delay_variance)},
          {"p50", number(s.p50)},
          {"p90", number(s.p90)},
          {"p95", number(s.p95)},
          {"p99", number(s.p99)},
          {"deferred_fraction", number(s.deferred_fraction)},
          {"demand_rate", number(s.demand_rate)},
          {"throughput", number(s.throughput)},
          {"nodes", nodes}};
}

}  // namespace

std::string_view version() { return LEDGERSIM_VERSION; }

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_transactions_csv(std::ostream& out, const SimResult& result) {
  out << kTransactionsHeader << '\n';
  for (const auto& tx : result.transactions) {
    out << tx.user << ',' << tx.node << ',' << format_number(tx.created_at)
        << ',' << format_number(tx.enqueued_at) << ','
        << format_number(tx.issued_at) << ',' << format_number(tx.delay())
        << ',' << format_number(tx.fee_paid) << '\n';
  }
}

std::vector<TxRecord> read_transactions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTransactionsHeader) {
    throw IoError("transactions.csv: missing or unexpected header");
  }
  std::vector<TxRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) {
      throw IoError("transactions.csv: expected 7 fields, got " +
                    std::to_string(f.size()));
    }
    TxRecord r;
    r.id = records.size();
    r.user = std::stoull(f[0]);
    r.node = std::stoull(f[1]);
    r.created_at = std::stod(f[2]);
    r.enqueued_at = std::stod(f[3]);
    r.issued_at = std::stod(f[4]);
    r.fee_paid = std::stod(f[6]);
    records.push_back(r);
  }
  return records;
}

void write_node_series_csv(std::ostream& out, const SimResult& result) {
  out << kNodeSeriesHeader << '\n';
  for (const auto& s : result.node_series) {
    out << format_number(s.time) << ',' << s.node << ',' << s.ltp_length << ','
        << format_number(s.issue_rate) << ',' << format_number(s.filtered_rate)
        << ',' << format_number(s.advertised_delay) << ','
        << format_number(s.fee) << ',' << format_number(s.reputation) << ','
        << s.inbox_length << '\n';
  }
}

void write_sending_rate_csv(std::ostream& out, const SimResult& result) {
  out << kSendingRateHeader << '\n';
  for (const auto& d : result.demand) {
    out << format_number(d.time) << ',' << d.created << ',' << d.sent << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const DelayHistogram& h) {
  out << "bin_start,bin_end,count,density\n";
  const auto density = h.density();
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    const double lo = static_cast<double>(k) * h.bin_width;
    out << format_number(lo) << ',' << format_number(lo + h.bin_width) << ','
        << h.counts[k] << ',' << format_number(density[k]) << '\n';
  }
}

std::string summary_to_json(const SummaryStats& summary) {
  return summary_value(summary).dump(2) + "\n";
}

std::string comparison_table(std::span<const SummaryStats> summaries) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "policy" << std::right << std::setw(6)
      << "load" << std::setw(6) << "runs" << std::setw(10) << "tx"
      << std::setw(11) << "mean" << std::setw(11) << "variance"
      << std::setw(11) << "p50" << std::setw(11) << "p90" << std::setw(11)
      << "p95" << std::setw(11) << "p99" << std::setw(10) << "deferred"
      << std::setw(11) << "throughput" << '\n';
  for (const auto& s : summaries) {
    out << std::left << std::setw(10) << s.policy << std::right
        << std::setw(6) << format_number(s.load_fraction) << std::setw(6)
        << s.runs << std::setw(10) << s.transactions << std::setw(11)
        << format_number(s.mean_delay) << std::setw(11)
        << format_number(s.delay_variance) << std::setw(11)
        << format_number(s.p50) << std::setw(11) << format_number(s.p90)
        << std::setw(11) << format_number(s.p95) << std::setw(11)
        << format_number(s.p99) << std::setw(10)
        << format_number(s.deferred_fraction) << std::setw(11)
        << format_number(s.throughput) << '\n';
  }
  return out.str();
}

void write_comparison_csv(std::ostream& out,
                          std::span<const SummaryStats> summaries) {
  out << "policy,load_fraction,runs,transactions,mean_delay,delay_variance,"
         "p50,p90,p95,p99,deferred_fraction,demand_rate,throughput\n";
  for (const auto& s : summaries) {
    out << s.policy << ',' << format_number(s.load_fraction) << ',' << s.runs
        << ',' << s.transactions << ',' << format_number(s.mean_delay) << ','
        << format_number(s.delay_variance) << ',' << format_number(s.p50)
        << ',' << format_number(s.p90) << ',' << format_number(s.p95) << ','
        << format_number(s.p99) << ',' << format_number(s.deferred_fraction)
        << ',' << format_number(s.demand_rate) << ','
        << format_number(s.throughput) << '\n';
  }
}

void export_results(std::span<const SimResult> results,
                    const NetworkConfig& config, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() +
                  "': " + (ec ? ec.message() : "not a directory"));
  }

  const SummaryStats summary = summarize(results);
  {
    const auto path = out_dir / "summary.json";
    auto out = open_for_write(path);
    out << summary_to_json(summary);
    close_checked(out, path);
  }
  {
    json seeds = json::array();
    json runs = json::array();
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto& r = results[k];
      seeds.push_back(r.seed);
      char dir[32];
      std::snprintf(dir, sizeof dir, "run_%03zu", k);
      runs.push_back({{"dir", dir},
                      {"seed", r.seed},
                      {"created", r.created},
                      {"sent", r.sent},
                      {"issued", r.issued},
                      {"deferral_events", r.deferral_events},
                      {"deferred_transactions", r.deferred_transactions},
                      {"deferred_at_end", r.deferred_at_end},
                      {"in_ltp_at_end", r.in_ltp_at_end},
                      {"in_scheduler_at_end", r.in_scheduler_at_end}});
    }
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    const json meta = {{"version", std::string(version())},
                       {"config", json::parse(config_to_json(config))},
                       {"config_hash", hash},
                       {"policy", std::string(policy_name(config.policy))},
                       {"load_fraction", number(config.load_fraction)},
                       {"seeds", seeds},
                       {"runs", runs}};
    const auto path = out_dir / "run_meta.json";
    auto out = open_for_write(path);
    out << meta.dump(2) << '\n';
    close_checked(out, path);
  }
  {
    std::vector<double> pooled;
    for (const auto& r : results) {
      const auto d = post_warmup_delays(r);
      pooled.insert(pooled.end(), d.begin(), d.end());
    }
    const auto path = out_dir / "delay_histogram.csv";
    auto out = open_for_write(path);
    write_histogram_csv(out, compute_histogram(pooled, config.histogram_bin_width));
    close_checked(out, path);
  }

  for (std::size_t k = 0; k < results.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", k);
    const fs::path run_dir = out_dir / name;
    fs::create_directories(run_dir, ec);
    if (ec) {
      throw IoError("cannot create output directory '" + run_dir.string() +
                    "': " + ec.message());
    }
    const auto& r = results[k];
    auto write = [&](const char* file, auto&& writer) {
      const auto path = run_dir / file;
      auto out = open_for_write(path);
      writer(out, r);
      close_checked(out, path);
    };
    write("transactions.csv", [](std::ostream& o, const SimResult& x) {
      write_transactions_csv(o, x);
    });
    write("node_series.csv", [](std::ostream& o, const SimResult& x) {
      write_node_series_csv(o, x);
    });
    write("sending_rate.csv", [](std::ostream& o, const SimResult& x) {
      write_sending_rate_csv(o, x);
    });
  }
}

}  // namespace ledgersim
