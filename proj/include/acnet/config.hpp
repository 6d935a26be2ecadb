#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "acnet/ingest.hpp"
#include "acnet/netmetrics.hpp"
#include "acnet/pca.hpp"

namespace acnet {

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path out = "acnet_out";
  ingest::FilterConfig filter;
  int mc_samples = 1000;
  double alpha = 0.05;                 // link significance
  double corr_alpha = 0.05;            // correlation t test
  std::vector<double> prune{0.4};      // first entry drives correlations and PCA
  double presence = 0.8;
  std::vector<pca::Period> periods = pca::default_periods();
  std::uint64_t seed = 42;
  std::set<std::string> redundant_codes;
  netmetrics::IndicatorCodes codes;
  std::string equity_code = "TOT_EQUITY";
  std::vector<double> qr_sweep{0.3, 0.5, 0.8};

  double analysis_threshold() const { return prune.front(); }

  /// Throws ErrorKind::Config naming the offending key.
  void validate() const;

  /// Applies one `key = value` setting. Unknown keys throw ErrorKind::Config.
  void set(const std::string& key, const std::string& value);

  /// Canonical `key = value` text; reading it back reproduces this config.
  std::string to_text() const;
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
std::map<std::string, std::string> parse_key_values(const std::string& text);

PipelineConfig load_config(const std::filesystem::path& path);

std::vector<double> parse_double_list(const std::string& text, const std::string& key);

}  // namespace acnet
