#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ledgersim/config.hpp"
#include "ledgersim/engine.hpp"
#include "ledgersim/stats.hpp"

namespace ledgersim {

inline constexpr const char* kTransactionsHeader =
    "user_id,node_id,created_at,enqueued_at,issued_at,delay,fee_paid";
inline constexpr const char* kNodeSeriesHeader =
    "time,node_id,ltp_len,issue_rate,filtered_rate,adv_delay,fee,reputation,"
    "inbox_len";
inline constexpr const char* kSendingRateHeader = "time,created,sent";

/// Six significant digits, shortest form.
std::string format_number(double value);

void write_transactions_csv(std::ostream& out, const SimResult& result);
/// Parses a transactions.csv stream. Record ids are the zero-based row index.
std::vector<TxRecord> read_transactions_csv(std::istream& in);

void write_node_series_csv(std::ostream& out, const SimResult& result);
void write_sending_rate_csv(std::ostream& out, const SimResult& result);
void write_histogram_csv(std::ostream& out, const DelayHistogram& histogram);

std::string summary_to_json(const SummaryStats& summary);
/// Side-by-side rows, one per summary.
std::string comparison_table(std::span<const SummaryStats> summaries);
void write_comparison_csv(std::ostream& out,
                          std::span<const SummaryStats> summaries);

/// Writes summary.json, run_meta.json and delay_histogram.csv at the top of
/// out_dir, and transactions.csv, node_series.csv, sending_rate.csv under
/// run_<k>/ for each result. Throws IoError naming the path on failure.
void export_results(std::span<const SimResult> results,
                    const NetworkConfig& config,
                    const std::filesystem::path& out_dir);

/// Artifact version string embedded in run_meta.json.
std::string_view version();

}  // namespace ledgersim
