#include "acnet/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "acnet/textio.hpp"

namespace acnet {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::Config, "config '" + key + "': " + what);
}

double to_double(const std::string& key, const std::string& value) {
  double d = 0;
  if (!textio::parse_double(value, d)) bad(key, "expected a number, got '" + value + "'");
  return d;
}

long long to_int(const std::string& key, const std::string& value) {
  long long i = 0;
  if (!textio::parse_int(value, i)) bad(key, "expected an integer, got '" + value + "'");
  return i;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out.push_back(',');
    out += textio::format_double(xs[i]);
  }
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : textio::split_list(text, ',')) out.push_back(to_double(key, item));
  return out;
}

void PipelineConfig::validate() const {
  try {
    filter.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("config filter: ") + e.what());
  }
  if (mc_samples < 100) bad("mc_samples", "must be at least 100");
  if (!(alpha > 0.0 && alpha < 1.0)) bad("alpha", "must lie in (0,1)");
  if (!(corr_alpha > 0.0 && corr_alpha < 1.0)) bad("corr_alpha", "must lie in (0,1)");
  if (prune.empty()) bad("prune", "needs at least one threshold");
  for (double t : prune) {
    if (!(t >= 0.0 && t <= 1.0)) bad("prune", "thresholds must lie in [0,1]");
  }
  if (!std::is_sorted(prune.begin(), prune.end())) bad("prune", "thresholds must be ascending");
  if (!(presence > 0.0 && presence <= 1.0)) bad("presence", "must lie in (0,1]");
  if (periods.empty()) bad("periods", "needs at least one period");
  for (double t : qr_sweep) {
    if (!(t >= 0.0 && t <= 1.0)) bad("qr_sweep", "thresholds must lie in [0,1]");
  }
  if (!std::is_sorted(qr_sweep.begin(), qr_sweep.end())) bad("qr_sweep", "must be ascending");
  if (codes.total_assets.empty()) bad("total_assets_code", "must not be empty");
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "input") input = value;
  else if (key == "out") out = value;
  else if (key == "qr") filter.qr_threshold = to_double(key, value);
  else if (key == "min_statements") filter.min_statements = static_cast<int>(to_int(key, value));
  else if (key == "max_sample_years") filter.max_sample_years = static_cast<int>(to_int(key, value));
  else if (key == "max_gap_days") filter.max_gap_days = static_cast<int>(to_int(key, value));
  else if (key == "fiscal_window_months") filter.fiscal_window_months = static_cast<int>(to_int(key, value));
  else if (key == "sample_start_year") filter.sample_start_year = static_cast<int>(to_int(key, value));
  else if (key == "sample_end_year") filter.sample_end_year = static_cast<int>(to_int(key, value));
  else if (key == "mc_samples") mc_samples = static_cast<int>(to_int(key, value));
  else if (key == "alpha") alpha = to_double(key, value);
  else if (key == "corr_alpha") corr_alpha = to_double(key, value);
  else if (key == "prune") prune = parse_double_list(value, key);
  else if (key == "presence") presence = to_double(key, value);
  else if (key == "periods") periods = pca::parse_periods(value);
  else if (key == "seed") {
    long long s = to_int(key, value);
    if (s < 0) bad(key, "must be nonnegative");
    seed = static_cast<std::uint64_t>(s);
  }
  else if (key == "redundant_codes") {
    auto items = textio::split_list(value, ',');
    redundant_codes = std::set<std::string>(items.begin(), items.end());
  }
  else if (key == "total_assets_code") codes.total_assets = value;
  else if (key == "net_income_code") codes.net_income = value;
  else if (key == "total_debts_code") codes.total_debts = value;
  else if (key == "equity_code") equity_code = value;
  else if (key == "qr_sweep") qr_sweep = parse_double_list(value, key);
  else bad(key, "unknown key");
}

std::string PipelineConfig::to_text() const {
  std::ostringstream o;
  std::string redundant;
  for (const auto& c : redundant_codes) {
    if (!redundant.empty()) redundant.push_back(',');
    redundant += c;
  }
  o << "input = " << input.string() << "\n"
    << "out = " << out.string() << "\n"
    << "qr = " << textio::format_double(filter.qr_threshold) << "\n"
    << "min_statements = " << filter.min_statements << "\n"
    << "max_sample_years = " << filter.max_sample_years << "\n"
    << "max_gap_days = " << filter.max_gap_days << "\n"
    << "fiscal_window_months = " << filter.fiscal_window_months << "\n"
    << "sample_start_year = " << filter.sample_start_year << "\n"
    << "sample_end_year = " << filter.sample_end_year << "\n"
    << "mc_samples = " << mc_samples << "\n"
    << "alpha = " << textio::format_double(alpha) << "\n"
    << "corr_alpha = " << textio::format_double(corr_alpha) << "\n"
    << "prune = " << join_doubles(prune) << "\n"
    << "presence = " << textio::format_double(presence) << "\n"
    << "periods = " << pca::format_periods(periods) << "\n"
    << "seed = " << seed << "\n"
    << "redundant_codes = " << redundant << "\n"
    << "total_assets_code = " << codes.total_assets << "\n"
    << "net_income_code = " << codes.net_income << "\n"
    << "total_debts_code = " << codes.total_debts << "\n"
    << "equity_code = " << equity_code << "\n"
    << "qr_sweep = " << join_doubles(qr_sweep) << "\n";
  return o.str();
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (textio::trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    out[textio::trim(line.substr(0, eq))] = textio::trim(line.substr(eq + 1));
  }
  return out;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  PipelineConfig cfg;
  for (const auto& [k, v] : parse_key_values(buf.str())) cfg.set(k, v);
  return cfg;
}

}  // namespace acnet
