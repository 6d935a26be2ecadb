#pragma once

// Community characterization by scaled (correlation-matrix) PCA: Kaiser
// retention, per-measure communalities, and sub-period rankings.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acnet/error.hpp"
#include "acnet/ingest.hpp"

namespace acnet::pca {

struct PcaModel {
  std::vector<std::string> measure_codes;
  std::vector<double> eigenvalues;  // descending, clamped at 0
  Eigen::MatrixXd loadings;         // measure x component, eigenvector * sqrt(eigenvalue)
  int retained = 0;                 // components with eigenvalue > 1
};

/// Standardizes each column, eigendecomposes the correlation matrix and
/// orients every eigenvector so its largest-magnitude entry is positive.
/// Constant columns are dropped with a warning. Fewer than two rows or two
/// usable columns throws ErrorKind::InsufficientData.
PcaModel fit_scaled_pca(const Eigen::MatrixXd& data, const std::vector<std::string>& measure_codes,
                        Warnings* warnings = nullptr);

/// Communality of each measure over the retained components:
/// sum_k loading(j,k)^2. Throws ErrorKind::NoRetainedComponents when the
/// model retains nothing; use retain_at_least() to fall back.
std::map<std::string, double> measure_contributions(const PcaModel& model);

PcaModel retain_at_least(PcaModel model, int components);

struct Period {
  int first_year = 0;
  int last_year = 0;

  std::string label() const;
  bool contains(int year) const { return year >= first_year && year <= last_year; }
};

/// "2001-2006,2007-2009,2010-2013"; a single year "2005" is allowed.
std::vector<Period> parse_periods(const std::string& text);
std::string format_periods(const std::vector<Period>& periods);
std::vector<Period> default_periods();

struct YearContributions {
  int community_id = 0;
  int year = 0;
  std::map<std::string, double> contributions;
};

using RankedMeasure = std::pair<std::string, double>;

struct ContributionRanking {
  int community_id = 0;
  Period period;
  std::map<std::string, double> contributions;  // period means
  std::vector<RankedMeasure> top3;              // descending
  std::vector<RankedMeasure> bottom3;           // ascending
};

struct RankingSkip {
  int community_id = 0;
  Period period;
  std::string reason;
};

struct RankingResult {
  std::vector<ContributionRanking> rankings;
  std::vector<RankingSkip> skipped;
};

/// Averages each community's yearly contributions within every period and
/// ranks measures by the means. Ties rank by measure code.
RankingResult period_rankings(const std::vector<YearContributions>& yearly,
                              const std::vector<Period>& periods);

/// community_id,period,rank_type,rank,measure_code,mean_contribution
std::string rankings_to_csv(const std::vector<ContributionRanking>& rankings);

/// Ratio added to the measure set: numerator / denominator from raw values.
struct DerivedMeasure {
  std::string name;
  std::string numerator;
  std::string denominator;
};

struct MeasureSpec {
  std::set<std::string> ratio_codes;  // divided by total assets
  std::string total_assets_code;      // included raw as the size measure
  std::vector<DerivedMeasure> derived;

  std::vector<std::string> measure_codes() const;
};

/// Members x measures table for one community-year. Missing inputs become 0,
/// matching the feature zero-fill policy.
Eigen::MatrixXd measure_table(const std::vector<const ingest::BankPanel*>& members, int year,
                              const MeasureSpec& spec);

}  // namespace acnet::pca
