#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acnet/ingest.hpp"

namespace acnet::synthgen {

struct SyntheticSpec {
  int n_banks = 60;
  int n_groups = 3;
  int n_variables = 20;  // statement variables besides total assets
  int first_year = 2001;
  int last_year = 2013;
  double within_noise = 0.01;
  double between_separation = 0.3;
  double missing_rate = 0.05;
  double missing_rate_spread = 0.0;  // bank rate drawn from [missing_rate, missing_rate + spread]
  double size_log10_min = 8.0;       // total assets drawn log-uniformly
  double size_log10_max = 12.0;
  std::uint64_t rng_seed = 1;

  /// Throws ErrorKind::Config for a degenerate spec.
  void validate() const;
};

struct GroundTruth {
  std::string bank_id;
  int group = 0;
  double quality_ratio = 0.0;  // over all emitted codes and years
};

struct SyntheticPanel {
  std::vector<ingest::StatementRecord> records;
  std::vector<GroundTruth> truth;  // sorted by bank_id
};

/// Codes the generator emits. The first three non-size variables double as
/// the indicator inputs (net income, total debts, equity).
inline const std::string kTotalAssets = "BS_TOT_ASSET";
std::vector<std::string> variable_codes(int n_variables);

/// Each group receives a template ratio vector (a shared positive base plus
/// Gaussian offsets scaled by `between_separation`); every bank-year is its
/// template plus Gaussian noise of scale `within_noise`, multiplied by the
/// bank's total assets. Non-size observations are dropped i.i.d. at the
/// bank's missing rate. Deterministic for a given seed.
SyntheticPanel generate(const SyntheticSpec& spec);

std::string records_to_csv(const std::vector<ingest::StatementRecord>& records);
std::string truth_to_csv(const std::vector<GroundTruth>& truth);

}  // namespace acnet::synthgen
