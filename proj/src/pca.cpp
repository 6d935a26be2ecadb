#include "acnet/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "acnet/textio.hpp"

namespace acnet::pca {

PcaModel fit_scaled_pca(const Eigen::MatrixXd& data, const std::vector<std::string>& measure_codes,
                        Warnings* warnings) {
  if (static_cast<std::size_t>(data.cols()) != measure_codes.size()) {
    throw Error(ErrorKind::Invariant, "measure code count does not match data columns");
  }
  if (data.rows() < 2) throw Error(ErrorKind::InsufficientData, "PCA needs at least 2 members");

  std::vector<Eigen::Index> keep;
  PcaModel model;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const auto col = data.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      if (warnings) warnings->add("constant measure '" + measure_codes[j] + "' dropped from PCA");
      continue;
    }
    keep.push_back(j);
    model.measure_codes.push_back(measure_codes[j]);
  }
  const auto p = static_cast<Eigen::Index>(keep.size());
  if (p < 2) throw Error(ErrorKind::InsufficientData, "PCA needs at least 2 non-constant measures");

  const Eigen::Index n = data.rows();
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto col = data.col(keep[k]);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n - 1));
    z.col(k) = (col.array() - mean) / sd;
  }
  const Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Invariant, "eigendecomposition of the correlation matrix failed");
  }

  struct Component {
    double value;
    Eigen::VectorXd vector;
  };
  std::vector<Component> comps;
  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    comps.push_back({std::max(0.0, solver.eigenvalues()(k)), std::move(v)});
  }
  std::stable_sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    if (a.value != b.value) return a.value > b.value;
    return std::lexicographical_compare(b.vector.begin(), b.vector.end(), a.vector.begin(),
                                        a.vector.end());
  });

  model.loadings.resize(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    model.eigenvalues.push_back(comps[k].value);
    model.loadings.col(k) = comps[k].vector * std::sqrt(comps[k].value);
    if (comps[k].value > 1.0) ++model.retained;
  }
  return model;
}

std::map<std::string, double> measure_contributions(const PcaModel& model) {
  if (model.retained < 1) {
    throw Error(ErrorKind::NoRetainedComponents,
                "no component has eigenvalue above 1; retain at least the first component");
  }
  std::map<std::string, double> out;
  for (std::size_t j = 0; j < model.measure_codes.size(); ++j) {
    const auto row = model.loadings.row(static_cast<Eigen::Index>(j)).head(model.retained);
    out[model.measure_codes[j]] = std::clamp(row.squaredNorm(), 0.0, 1.0);
  }
  return out;
}

PcaModel retain_at_least(PcaModel model, int components) {
  const int available = static_cast<int>(model.eigenvalues.size());
  model.retained = std::min(std::max(model.retained, components), available);
  return model;
}

std::string Period::label() const {
  if (first_year == last_year) return std::to_string(first_year);
  return std::to_string(first_year) + "-" + std::to_string(last_year);
}

std::vector<Period> parse_periods(const std::string& text) {
  std::vector<Period> out;
  for (const auto& item : textio::split_list(text, ',')) {
    const auto dash = item.find('-', 1);
    long long a = 0, b = 0;
    bool ok = false;
    if (dash == std::string::npos) {
      ok = textio::parse_int(item, a);
      b = a;
    } else {
      ok = textio::parse_int(item.substr(0, dash), a) && textio::parse_int(item.substr(dash + 1), b);
    }
    if (!ok || b < a) throw Error(ErrorKind::Config, "bad period '" + item + "'");
    out.push_back(Period{static_cast<int>(a), static_cast<int>(b)});
  }
  if (out.empty()) throw Error(ErrorKind::Config, "no periods given");
  std::vector<Period> sorted = out;
  std::sort(sorted.begin(), sorted.end(),
            [](const Period& x, const Period& y) { return x.first_year < y.first_year; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].first_year <= sorted[i - 1].last_year) {
      throw Error(ErrorKind::Config, "periods overlap: " + sorted[i - 1].label() + " and " +
                                         sorted[i].label());
    }
  }
  return out;
}

std::string format_periods(const std::vector<Period>& periods) {
  std::string out;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (i) out.push_back(',');
    out += periods[i].label();
  }
  return out;
}

std::vector<Period> default_periods() { return {{2001, 2006}, {2007, 2009}, {2010, 2013}}; }

RankingResult period_rankings(const std::vector<YearContributions>& yearly,
                              const std::vector<Period>& periods) {
  std::set<int> communities;
  for (const auto& y : yearly) communities.insert(y.community_id);

  RankingResult result;
  for (int c : communities) {
    for (const auto& period : periods) {
      std::map<std::string, std::pair<double, int>> sums;
      for (const auto& y : yearly) {
        if (y.community_id != c || !period.contains(y.year)) continue;
        for (const auto& [code, value] : y.contributions) {
          sums[code].first += value;
          sums[code].second += 1;
        }
      }
      if (sums.empty()) {
        result.skipped.push_back({c, period, "community absent in period"});
        continue;
      }
      ContributionRanking r;
      r.community_id = c;
      r.period = period;
      std::vector<RankedMeasure> means;
      for (const auto& [code, acc] : sums) {
        const double mean = acc.first / acc.second;
        r.contributions[code] = mean;
        means.emplace_back(code, mean);
      }
      auto desc = means;
      std::stable_sort(desc.begin(), desc.end(),
                       [](const RankedMeasure& a, const RankedMeasure& b) { return a.second > b.second; });
      auto asc = means;
      std::stable_sort(asc.begin(), asc.end(),
                       [](const RankedMeasure& a, const RankedMeasure& b) { return a.second < b.second; });
      const std::size_t k = std::min<std::size_t>(3, means.size());
      r.top3.assign(desc.begin(), desc.begin() + static_cast<std::ptrdiff_t>(k));
      r.bottom3.assign(asc.begin(), asc.begin() + static_cast<std::ptrdiff_t>(k));
      result.rankings.push_back(std::move(r));
    }
  }
  return result;
}

std::string rankings_to_csv(const std::vector<ContributionRanking>& rankings) {
  std::string out = "community_id,period,rank_type,rank,measure_code,mean_contribution\n";
  auto emit = [&](const ContributionRanking& r, const char* type, const std::vector<RankedMeasure>& list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      out += textio::join_record({std::to_string(r.community_id), r.period.label(), type,
                                  std::to_string(i + 1), list[i].first,
                                  textio::format_double(list[i].second)},
                                 ',');
      out.push_back('\n');
    }
  };
  for (const auto& r : rankings) {
    emit(r, "top", r.top3);
    emit(r, "bottom", r.bottom3);
  }
  return out;
}

std::vector<std::string> MeasureSpec::measure_codes() const {
  std::vector<std::string> codes(ratio_codes.begin(), ratio_codes.end());
  if (!total_assets_code.empty() && !ratio_codes.count(total_assets_code)) {
    codes.push_back(total_assets_code);
  }
  for (const auto& d : derived) codes.push_back(d.name);
  return codes;
}

Eigen::MatrixXd measure_table(const std::vector<const ingest::BankPanel*>& members, int year,
                              const MeasureSpec& spec) {
  const auto codes = spec.measure_codes();
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(members.size()),
                                                static_cast<Eigen::Index>(codes.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto st = members[i]->years.find(year);
    if (st == members[i]->years.end()) continue;
    const auto& v = st->second.values;
    auto lookup = [&](const std::string& code) -> std::optional<double> {
      auto it = v.find(code);
      if (it == v.end()) return std::nullopt;
      return it->second;
    };
    const double ta = lookup(spec.total_assets_code).value_or(0.0);
    Eigen::Index j = 0;
    const auto row = static_cast<Eigen::Index>(i);
    for (const auto& code : spec.ratio_codes) {
      const auto x = lookup(code);
      table(row, j++) = (x && ta > 0.0) ? *x / ta : 0.0;
    }
    if (!spec.total_assets_code.empty() && !spec.ratio_codes.count(spec.total_assets_code)) {
      table(row, j++) = ta;
    }
    for (const auto& d : spec.derived) {
      const auto num = lookup(d.numerator);
      const auto den = lookup(d.denominator);
      table(row, j++) = (num && den && *den != 0.0) ? *num / *den : 0.0;
    }
  }
  return table;
}

}  // namespace acnet::pca
