#include "acnet/synthgen.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace acnet::synthgen {

namespace chr = std::chrono;

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, "synthetic spec: " + msg); };
  if (n_banks < 1) fail("n_banks must be positive");
  if (n_groups < 1 || n_groups > n_banks) fail("n_groups must lie in [1, n_banks]");
  if (n_variables < 1) fail("n_variables must be positive");
  if (last_year < first_year) fail("empty year range");
  if (!(within_noise >= 0.0)) fail("within_noise must be nonnegative");
  if (!(between_separation >= 0.0)) fail("between_separation must be nonnegative");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) fail("missing_rate must lie in [0,1)");
  if (!(missing_rate_spread >= 0.0 && missing_rate + missing_rate_spread < 1.0)) {
    fail("missing_rate + missing_rate_spread must stay below 1");
  }
  if (!(size_log10_min <= size_log10_max)) fail("size range is inverted");
}

std::vector<std::string> variable_codes(int n_variables) {
  static const char* named[] = {"NET_INCOME", "TOT_DEBT", "TOT_EQUITY"};
  std::vector<std::string> codes;
  for (int j = 0; j < n_variables; ++j) {
    if (j < 3) {
      codes.emplace_back(named[j]);
    } else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "VAR_%03d", j + 1);
      codes.emplace_back(buf);
    }
  }
  return codes;
}

SyntheticPanel generate(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto codes = variable_codes(spec.n_variables);
  const auto nv = static_cast<std::size_t>(spec.n_variables);

  std::vector<double> base(nv);
  for (auto& b : base) b = 0.02 + 0.18 * unit(rng);
  std::vector<std::vector<double>> templates(static_cast<std::size_t>(spec.n_groups),
                                             std::vector<double>(nv));
  for (auto& t : templates) {
    for (std::size_t j = 0; j < nv; ++j) t[j] = base[j] + spec.between_separation * gauss(rng);
  }

  static const char* countries[] = {"US", "JP", "DE", "FR", "GB", "IT"};
  static const int year_end_month[] = {12, 3};  // Dec 31 of Y or Mar 31 of Y+1

  SyntheticPanel out;
  const int n_years = spec.last_year - spec.first_year + 1;
  for (int b = 0; b < spec.n_banks; ++b) {
    char id[16];
    std::snprintf(id, sizeof id, "B%03d", b);
    const int group = b % spec.n_groups;
    const double size = std::pow(10.0, spec.size_log10_min +
                                           (spec.size_log10_max - spec.size_log10_min) * unit(rng));
    const double rate = spec.missing_rate + spec.missing_rate_spread * unit(rng);
    const int style = static_cast<int>(unit(rng) * 2.0) % 2;
    const auto& tmpl = templates[static_cast<std::size_t>(group)];

    std::size_t present = 0;
    for (int y = spec.first_year; y <= spec.last_year; ++y) {
      const ingest::Date date =
          year_end_month[style] == 12
              ? ingest::Date{chr::year{y}, chr::December, chr::day{31}}
              : ingest::Date{chr::year{y + 1}, chr::March, chr::day{31}};
      const double assets = size * std::exp(0.03 * (y - spec.first_year));
      const std::string country = countries[group % 6];
      out.records.push_back({id, country, date, kTotalAssets, assets});
      ++present;
      for (std::size_t j = 0; j < nv; ++j) {
        const double ratio = tmpl[j] + spec.within_noise * gauss(rng);
        const bool dropped = unit(rng) < rate;
        if (dropped) continue;
        out.records.push_back({id, country, date, codes[j], ratio * assets});
        ++present;
      }
    }
    const double possible = static_cast<double>(nv + 1) * static_cast<double>(n_years);
    out.truth.push_back({id, group, static_cast<double>(present) / possible});
  }
  return out;
}

std::string records_to_csv(const std::vector<ingest::StatementRecord>& records) {
  std::string out = "bank_id,country,statement_date,variable_code,value\n";
  for (const auto& r : records) {
    out += textio::join_record({r.bank_id, r.country, ingest::format_iso_date(r.statement_date),
                                r.variable_code, textio::format_double(r.value)},
                               ',');
    out.push_back('\n');
  }
  return out;
}

std::string truth_to_csv(const std::vector<GroundTruth>& truth) {
  std::string out = "bank_id,group,qr\n";
  for (const auto& t : truth) {
    out += t.bank_id + "," + std::to_string(t.group) + "," + textio::format_double(t.quality_ratio) + "\n";
  }
  return out;
}

}  // namespace acnet::synthgen
