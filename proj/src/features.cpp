#include "acnet/features.hpp"

#include <algorithm>
#include <map>

namespace acnet::features {

FeatureMatrix::FeatureMatrix(int year, std::vector<std::string> bank_ids,
                             std::vector<std::string> variable_codes)
    : year_(year),
      bank_ids_(std::move(bank_ids)),
      variable_codes_(std::move(variable_codes)),
      values_(bank_ids_.size() * variable_codes_.size(), 0.0),
      mask_(bank_ids_.size() * variable_codes_.size(), 0) {
  total_assets.assign(bank_ids_.size(), 0.0);
  countries.assign(bank_ids_.size(), std::string{});
}

FeatureMatrix build_feature_matrix(const std::vector<ingest::BankPanel>& panels, int year,
                                   const std::string& size_proxy_code, Warnings& warnings) {
  struct Candidate {
    const ingest::BankPanel* panel;
    const ingest::StatementVector* values;
    double total_assets;
  };
  std::vector<Candidate> candidates;
  std::set<std::string> codes;

  for (const auto& panel : panels) {
    auto st = panel.years.find(year);
    if (st == panel.years.end()) continue;
    const auto& values = st->second.values;
    auto ta = values.find(size_proxy_code);
    if (ta == values.end() || !(ta->second > 0.0)) {
      warnings.add(panel.bank_id + " " + std::to_string(year) +
                   ": missing or non-positive total assets; bank-year excluded");
      continue;
    }
    bool nonzero = false;
    for (const auto& [code, v] : values) {
      if (code != size_proxy_code && v != 0.0) nonzero = true;
    }
    if (!nonzero) {
      warnings.add(panel.bank_id + " " + std::to_string(year) +
                   ": feature row is entirely zero; bank-year excluded");
      continue;
    }
    for (const auto& [code, v] : values) {
      if (code != size_proxy_code) codes.insert(code);
    }
    candidates.push_back(Candidate{&panel, &values, ta->second});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.panel->bank_id < b.panel->bank_id;
  });

  std::vector<std::string> ids;
  for (const auto& c : candidates) ids.push_back(c.panel->bank_id);
  std::vector<std::string> cols(codes.begin(), codes.end());
  FeatureMatrix m(year, std::move(ids), cols);

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    m.total_assets[i] = c.total_assets;
    m.countries[i] = c.panel->country;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      auto it = c.values->find(cols[j]);
      if (it == c.values->end()) continue;
      m.at(i, j) = it->second / c.total_assets;
      m.set_present(i, j, true);
    }
  }
  return m;
}

std::set<std::string> popular_variables(const std::vector<FeatureMatrix>& matrices,
                                        double presence_fraction) {
  if (!(presence_fraction > 0.0 && presence_fraction <= 1.0)) {
    throw Error(ErrorKind::Config, "presence_fraction must lie in (0,1]");
  }
  std::map<std::string, std::size_t> seen;
  std::size_t bank_years = 0;
  for (const auto& m : matrices) {
    bank_years += m.rows();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < m.rows(); ++i) count += m.present(i, j) ? 1 : 0;
      seen[m.variable_codes()[j]] += count;
    }
  }
  std::set<std::string> out;
  if (bank_years == 0) return out;
  for (const auto& [code, count] : seen) {
    // count/bank_years >= fraction, compared without dividing
    if (static_cast<double>(count) >= presence_fraction * static_cast<double>(bank_years)) {
      out.insert(code);
    }
  }
  return out;
}

std::string matrix_to_csv(const FeatureMatrix& matrix) {
  std::vector<std::string> header{"bank_id"};
  header.insert(header.end(), matrix.variable_codes().begin(), matrix.variable_codes().end());
  std::string out = textio::join_record(header, ',') + "\n";
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    std::vector<std::string> rec{matrix.bank_ids()[i]};
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      rec.push_back(textio::format_double(matrix.at(i, j)));
    }
    out += textio::join_record(rec, ',') + "\n";
  }
  return out;
}

}  // namespace acnet::features
