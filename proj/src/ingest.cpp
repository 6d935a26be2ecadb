#include "acnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace acnet::ingest {

namespace chr = std::chrono;

std::vector<Date> BankPanel::statement_dates() const {
  std::vector<Date> dates;
  dates.reserve(years.size());
  for (const auto& [year, statement] : years) dates.push_back(statement.statement_date);
  std::sort(dates.begin(), dates.end());
  return dates;
}

long long BankPanel::max_gap_days() const {
  const auto dates = statement_dates();
  long long gap = 0;
  for (std::size_t i = 1; i < dates.size(); ++i) {
    const auto d = (chr::sys_days{dates[i]} - chr::sys_days{dates[i - 1]}).count();
    gap = std::max<long long>(gap, d);
  }
  return gap;
}

void FilterConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
  if (!(qr_threshold >= 0.0 && qr_threshold <= 1.0)) fail("qr_threshold must lie in [0,1]");
  if (min_statements < 0) fail("min_statements must be nonnegative");
  if (max_sample_years < 1) fail("max_sample_years must be positive");
  if (min_statements > max_sample_years) fail("min_statements exceeds max_sample_years");
  if (max_gap_days < 0) fail("max_gap_days must be nonnegative");
  if (fiscal_window_months < 0 || fiscal_window_months > 12) {
    fail("fiscal_window_months must lie in [0,12]");
  }
  if (sample_end_year < sample_start_year) fail("sample_end_year precedes sample_start_year");
  if (sample_year_count() > max_sample_years) {
    fail("sample period spans more than max_sample_years years");
  }
}

Date parse_iso_date(std::string_view text, bool& ok) {
  ok = false;
  const std::string t = textio::trim(text);
  if (t.size() != 10 || t[4] != '-' || t[7] != '-') return {};
  long long y = 0, m = 0, d = 0;
  if (!textio::parse_int(std::string_view(t).substr(0, 4), y) ||
      !textio::parse_int(std::string_view(t).substr(5, 2), m) ||
      !textio::parse_int(std::string_view(t).substr(8, 2), d)) {
    return {};
  }
  Date date{chr::year{static_cast<int>(y)}, chr::month{static_cast<unsigned>(m)},
            chr::day{static_cast<unsigned>(d)}};
  ok = date.ok();
  return date;
}

std::string format_iso_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

ParseResult parse_statements(const textio::Table& table) {
  const std::size_t c_bank = table.column("bank_id");
  const std::size_t c_country = table.column("country");
  const std::size_t c_date = table.column("statement_date");
  const std::size_t c_code = table.column("variable_code");
  const std::size_t c_value = table.column("value");
  const std::size_t width = table.header.size();

  ParseResult out;
  out.records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    auto reject = [&](std::string reason) {
      out.rejections.push_back(Rejection{row.line, std::move(reason)});
    };
    if (row.fields.size() != width) {
      reject("expected " + std::to_string(width) + " fields, found " +
             std::to_string(row.fields.size()));
      continue;
    }
    StatementRecord rec;
    rec.bank_id = textio::trim(row.fields[c_bank]);
    rec.country = textio::trim(row.fields[c_country]);
    rec.variable_code = textio::trim(row.fields[c_code]);
    if (rec.bank_id.empty()) {
      reject("empty bank_id");
      continue;
    }
    if (rec.variable_code.empty()) {
      reject("empty variable_code");
      continue;
    }
    bool ok = false;
    rec.statement_date = parse_iso_date(row.fields[c_date], ok);
    if (!ok) {
      reject("unparsable statement_date '" + row.fields[c_date] + "'");
      continue;
    }
    if (!textio::parse_double(row.fields[c_value], rec.value) || !std::isfinite(rec.value)) {
      reject("unparsable value '" + row.fields[c_value] + "'");
      continue;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

ParseResult read_statements(const std::filesystem::path& path) {
  return parse_statements(textio::read_table(path, ','));
}

void require_clean(const ParseResult& parsed) {
  if (parsed.rejections.empty()) return;
  std::ostringstream msg;
  msg << parsed.rejections.size() << " malformed row(s):";
  const std::size_t shown = std::min<std::size_t>(parsed.rejections.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    msg << "\n  line " << parsed.rejections[i].line << ": " << parsed.rejections[i].reason;
  }
  if (shown < parsed.rejections.size()) msg << "\n  ...";
  throw Error(ErrorKind::Parse, msg.str());
}

int assign_fiscal_year(const Date& statement_date, int window_months) {
  if (window_months < 0) throw Error(ErrorKind::Config, "window_months must be nonnegative");
  if (!statement_date.ok()) throw Error(ErrorKind::UnassignableDate, "invalid calendar date");
  const int year = static_cast<int>(statement_date.year());
  const int month = static_cast<int>(static_cast<unsigned>(statement_date.month()));
  if (month == 12 && statement_date.day() == chr::day{31}) return year;

  const bool closes_year = month > 12 - window_months;  // tail of this year
  const bool opens_year = month <= window_months;       // head of next year
  if (closes_year && opens_year) return month >= 7 ? year : year - 1;
  if (closes_year) return year;
  if (opens_year) return year - 1;
  throw Error(ErrorKind::UnassignableDate,
              format_iso_date(statement_date) + " lies outside every " +
                  std::to_string(window_months) + "-month fiscal year-end window");
}

std::vector<StatementRecord> drop_redundant_variables(std::vector<StatementRecord> records,
                                                      const std::set<std::string>& redundant_codes,
                                                      const std::string& size_proxy_code,
                                                      Warnings& warnings) {
  if (redundant_codes.empty()) return records;
  if (redundant_codes.count(size_proxy_code)) {
    warnings.add("size proxy '" + size_proxy_code +
                 "' is listed as redundant; it is retained for normalization");
  }
  std::erase_if(records, [&](const StatementRecord& r) {
    return r.variable_code != size_proxy_code && redundant_codes.count(r.variable_code) > 0;
  });
  return records;
}

namespace {

// Distance from the fiscal year end (Dec 31 of `fiscal_year`) in days.
long long distance_to_year_end(const Date& date, int fiscal_year) {
  const chr::sys_days end{chr::year{fiscal_year} / chr::December / 31};
  const auto d = (chr::sys_days{date} - end).count();
  return d < 0 ? -d : d;
}

// True when `candidate` should replace `incumbent` as the statement of `fiscal_year`.
bool prefer(const Date& candidate, const Date& incumbent, int fiscal_year) {
  const auto dc = distance_to_year_end(candidate, fiscal_year);
  const auto di = distance_to_year_end(incumbent, fiscal_year);
  if (dc != di) return dc < di;
  return candidate > incumbent;
}

}  // namespace

PanelSet build_panels(const std::vector<StatementRecord>& records, const FilterConfig& config,
                      Warnings& warnings) {
  config.validate();

  // bank -> fiscal year -> statement date -> values
  struct Staging {
    std::string country;
    std::map<int, std::map<Date, StatementVector>> by_year;
  };
  std::map<std::string, Staging> staging;
  std::size_t unassignable = 0;

  for (const auto& rec : records) {
    int fy = 0;
    try {
      fy = assign_fiscal_year(rec.statement_date, config.fiscal_window_months);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnassignableDate) throw;
      ++unassignable;
      continue;
    }
    if (fy < config.sample_start_year || fy > config.sample_end_year) continue;
    auto& bank = staging[rec.bank_id];
    if (bank.country.empty()) bank.country = rec.country;
    auto& values = bank.by_year[fy][rec.statement_date];
    auto [it, inserted] = values.emplace(rec.variable_code, rec.value);
    if (!inserted) {
      warnings.add("duplicate observation " + rec.bank_id + "/" +
                   format_iso_date(rec.statement_date) + "/" + rec.variable_code +
                   "; last value kept");
      it->second = rec.value;
    }
  }
  if (unassignable > 0) {
    warnings.add(std::to_string(unassignable) +
                 " record(s) dated outside every fiscal year-end window were skipped");
  }

  PanelSet out;
  for (auto& [bank_id, bank] : staging) {
    BankPanel panel;
    panel.bank_id = bank_id;
    panel.country = bank.country;
    for (auto& [fy, by_date] : bank.by_year) {
      auto best = by_date.begin();
      for (auto it = std::next(by_date.begin()); it != by_date.end(); ++it) {
        if (prefer(it->first, best->first, fy)) best = it;
      }
      if (by_date.size() > 1) {
        warnings.add(bank_id + ": " + std::to_string(by_date.size()) +
                     " statements map to fiscal year " + std::to_string(fy) + "; kept " +
                     format_iso_date(best->first));
      }
      for (const auto& [code, value] : best->second) out.retained_codes.insert(code);
      panel.years.emplace(fy, AnnualStatement{best->first, std::move(best->second)});
    }
    out.panels.push_back(std::move(panel));
  }

  if (!out.retained_codes.empty()) {
    for (auto& panel : out.panels) {
      panel.quality_ratio = compute_quality_ratio(panel, out.retained_codes,
                                                  config.sample_start_year, config.sample_end_year);
    }
  }
  return out;
}

double compute_quality_ratio(const BankPanel& panel, const std::set<std::string>& retained_codes,
                             int first_year, int last_year) {
  if (retained_codes.empty()) throw Error(ErrorKind::Config, "retained code set is empty");
  if (last_year < first_year) throw Error(ErrorKind::Config, "sample year range is empty");
  std::size_t ok = 0;
  for (auto it = panel.years.lower_bound(first_year);
       it != panel.years.end() && it->first <= last_year; ++it) {
    for (const auto& [code, value] : it->second.values) {
      if (retained_codes.count(code) && std::isfinite(value)) ++ok;
    }
  }
  const double all = static_cast<double>(retained_codes.size()) *
                     static_cast<double>(last_year - first_year + 1);
  return static_cast<double>(ok) / all;
}

std::vector<BankPanel> filter_banks(const std::vector<BankPanel>& panels, const FilterConfig& config) {
  config.validate();
  std::vector<BankPanel> kept;
  for (const auto& p : panels) {
    if (p.quality_ratio < config.qr_threshold) continue;
    if (static_cast<long long>(p.years.size()) < config.min_statements) continue;
    if (p.max_gap_days() > config.max_gap_days) continue;
    kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(),
            [](const BankPanel& a, const BankPanel& b) { return a.bank_id < b.bank_id; });
  return kept;
}

std::vector<QrSweepRow> qr_sweep(const std::vector<BankPanel>& panels,
                                 const std::vector<double>& thresholds, const FilterConfig& config,
                                 const YearGraphCounter& counter) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorKind::Config, "QR sweep thresholds must be ascending");
  }
  std::vector<QrSweepRow> rows;
  for (double t : thresholds) {
    FilterConfig cfg = config;
    cfg.qr_threshold = t;
    const auto kept = filter_banks(panels, cfg);
    for (int year = config.sample_start_year; year <= config.sample_end_year; ++year) {
      const GraphCounts counts = counter(kept, year);
      rows.push_back(QrSweepRow{t, year, counts.nodes, counts.edges});
    }
  }
  return rows;
}

std::string panels_to_csv(const std::vector<BankPanel>& panels) {
  std::string out = "bank_id,country,fiscal_year,statement_date,variable_code,value\n";
  for (const auto& p : panels) {
    for (const auto& [fy, st] : p.years) {
      const std::string date = format_iso_date(st.statement_date);
      for (const auto& [code, value] : st.values) {
        out += textio::join_record({p.bank_id, p.country, std::to_string(fy), date, code,
                                    textio::format_double(value)},
                                   ',');
        out.push_back('\n');
      }
    }
  }
  return out;
}

std::vector<BankPanel> panels_from_csv(const textio::Table& table) {
  const std::size_t c_bank = table.column("bank_id");
  const std::size_t c_country = table.column("country");
  const std::size_t c_year = table.column("fiscal_year");
  const std::size_t c_date = table.column("statement_date");
  const std::size_t c_code = table.column("variable_code");
  const std::size_t c_value = table.column("value");
  std::map<std::string, BankPanel> banks;
  for (const auto& row : table.rows) {
    auto bad = [&](const std::string& what) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(row.line) + ": " + what);
    };
    if (row.fields.size() != table.header.size()) bad("wrong field count");
    long long fy = 0;
    double value = 0;
    bool ok = false;
    const Date date = parse_iso_date(row.fields[c_date], ok);
    if (!ok) bad("bad statement_date");
    if (!textio::parse_int(row.fields[c_year], fy)) bad("bad fiscal_year");
    if (!textio::parse_double(row.fields[c_value], value)) bad("bad value");
    auto& panel = banks[row.fields[c_bank]];
    panel.bank_id = row.fields[c_bank];
    panel.country = row.fields[c_country];
    auto& st = panel.years[static_cast<int>(fy)];
    st.statement_date = date;
    st.values[row.fields[c_code]] = value;
  }
  std::vector<BankPanel> out;
  for (auto& [id, p] : banks) out.push_back(std::move(p));
  return out;
}

std::string bank_report_csv(const std::vector<BankPanel>& all, const std::vector<BankPanel>& kept) {
  std::set<std::string> kept_ids;
  for (const auto& p : kept) kept_ids.insert(p.bank_id);
  std::string out = "bank_id,country,quality_ratio,n_statements,max_gap_days,retained\n";
  for (const auto& p : all) {
    out += textio::join_record({p.bank_id, p.country, textio::format_double(p.quality_ratio),
                                std::to_string(p.years.size()), std::to_string(p.max_gap_days()),
                                kept_ids.count(p.bank_id) ? "1" : "0"},
                               ',');
    out.push_back('\n');
  }
  return out;
}

}  // namespace acnet::ingest
