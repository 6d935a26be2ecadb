#pragma once

// Statement-panel ingestion: parsing, fiscal-year assignment, redundancy
// removal, Quality Ratio, and the continuity filters that select a stable
// bank universe.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "acnet/error.hpp"
#include "acnet/textio.hpp"

namespace acnet::ingest {

using Date = std::chrono::year_month_day;

struct StatementRecord {
  std::string bank_id;
  std::string country;  // optional ISO 3166-1 alpha-2, informational
  Date statement_date;
  std::string variable_code;
  double value = 0.0;
};

/// variable_code -> value for one annual statement.
using StatementVector = std::map<std::string, double>;

struct AnnualStatement {
  Date statement_date;
  StatementVector values;
};

struct BankPanel {
  std::string bank_id;
  std::string country;
  std::map<int, AnnualStatement> years;  // fiscal year -> statement
  double quality_ratio = 0.0;

  std::vector<Date> statement_dates() const;
  /// Largest distance in days between consecutive statement dates; 0 with
  /// fewer than two statements.
  long long max_gap_days() const;
};

struct FilterConfig {
  double qr_threshold = 0.5;
  int min_statements = 10;
  int max_sample_years = 13;
  int max_gap_days = 700;
  int fiscal_window_months = 3;
  int sample_start_year = 2001;
  int sample_end_year = 2013;

  /// Throws ErrorKind::Config when a field leaves its domain.
  void validate() const;
  int sample_year_count() const { return sample_end_year - sample_start_year + 1; }
};

struct Rejection {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<StatementRecord> records;
  std::vector<Rejection> rejections;
};

Date parse_iso_date(std::string_view text, bool& ok);
std::string format_iso_date(const Date& date);

/// Parses the comma-separated statement format (bank_id, country,
/// statement_date, variable_code, value). Malformed rows are reported with
/// their line number rather than aborting the parse.
ParseResult parse_statements(const textio::Table& table);
ParseResult read_statements(const std::filesystem::path& path);

/// Throws ErrorKind::Parse listing (up to ten) rejected line numbers.
void require_clean(const ParseResult& parsed);

/// Dates in the last `window_months` months of year Y or the first
/// `window_months` months of Y+1 belong to fiscal year Y; December 31 always
/// belongs to its own year. Overlapping windows (more than six months)
/// resolve to the nearer year end. Dates in no window throw
/// ErrorKind::UnassignableDate.
int assign_fiscal_year(const Date& statement_date, int window_months);

/// Removes records whose code is listed as a total/sub-total. The size proxy
/// is never removed; listing it only produces a warning.
std::vector<StatementRecord> drop_redundant_variables(std::vector<StatementRecord> records,
                                                      const std::set<std::string>& redundant_codes,
                                                      const std::string& size_proxy_code,
                                                      Warnings& warnings);

struct PanelSet {
  std::vector<BankPanel> panels;           // sorted by bank_id
  std::set<std::string> retained_codes;    // global code universe after redundancy removal
};

/// Groups records into per-bank annual statements inside the sample period
/// and attaches each bank's Quality Ratio. When two statement dates fall in
/// one fiscal year the date nearest December 31 wins (ties go to the later
/// date) and a warning is recorded.
PanelSet build_panels(const std::vector<StatementRecord>& records, const FilterConfig& config,
                      Warnings& warnings);

/// V_OK / V_ALL: finite observations of `retained_codes` over the sample
/// years, divided by |retained_codes| x |years|.
double compute_quality_ratio(const BankPanel& panel, const std::set<std::string>& retained_codes,
                             int first_year, int last_year);

/// Keeps banks meeting the QR floor, the statement-count floor, and the gap
/// cap. Output is sorted by bank_id.
std::vector<BankPanel> filter_banks(const std::vector<BankPanel>& panels, const FilterConfig& config);

struct QrSweepRow {
  double threshold = 0.0;
  int year = 0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
};

struct GraphCounts {
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

/// Builds the graph of one year from a filtered bank set and reports its size.
using YearGraphCounter = std::function<GraphCounts(const std::vector<BankPanel>&, int year)>;

std::vector<QrSweepRow> qr_sweep(const std::vector<BankPanel>& panels,
                                 const std::vector<double>& thresholds, const FilterConfig& config,
                                 const YearGraphCounter& counter);

/// Canonical filtered-panel dump consumed by later stages:
/// bank_id,country,fiscal_year,statement_date,variable_code,value.
std::string panels_to_csv(const std::vector<BankPanel>& panels);
std::vector<BankPanel> panels_from_csv(const textio::Table& table);

/// Per-bank filter diagnostics: bank_id,country,quality_ratio,n_statements,max_gap_days,retained.
std::string bank_report_csv(const std::vector<BankPanel>& all, const std::vector<BankPanel>& kept);

}  // namespace acnet::ingest
