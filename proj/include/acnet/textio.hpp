#pragma once

// Delimited-text plumbing shared by every stage: record splitting, exact
// number formatting, and atomic file emission.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace acnet::textio {

/// One parsed data line. `line` is 1-based and counts the header.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Index of a header column; throws ErrorKind::Parse when absent.
  std::size_t column(std::string_view name) const;
};

/// Splits one record. Double quotes group fields containing the delimiter;
/// a doubled quote inside a quoted field is a literal quote.
std::vector<std::string> split_record(std::string_view line, char delim);

/// Reads a headed delimited file. Blank lines are skipped, CR is stripped,
/// a UTF-8 BOM on the first line is ignored.
Table read_table(const std::filesystem::path& path, char delim);
Table parse_table(std::string_view text, char delim);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Strict decimal parse ('.' radix, whole field consumed).
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

/// Quotes a field when it contains the delimiter, a quote, or a newline.
std::string escape_field(std::string_view field, char delim);
std::string join_record(const std::vector<std::string>& fields, char delim);

/// Writes to a sibling temporary then renames, so readers never observe a
/// partially written report. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string trim(std::string_view text);
std::vector<std::string> split_list(std::string_view text, char delim);

}  // namespace acnet::textio
