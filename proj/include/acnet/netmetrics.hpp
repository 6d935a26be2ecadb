#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acnet/error.hpp"
#include "acnet/ingest.hpp"
#include "acnet/simgraph.hpp"

namespace acnet::netmetrics {

struct NodeMetrics {
  std::string bank_id;
  double strength = 0.0;
  double clustering = 0.0;
};

double node_strength(const simgraph::SimilarityGraph& graph, const std::string& bank_id);

/// Local clustering coefficient on the unweighted skeleton: 2T / (k(k-1)),
/// 0 for degree below two.
double clustering_coefficient(const simgraph::SimilarityGraph& graph, const std::string& bank_id);

std::vector<NodeMetrics> node_metrics(const simgraph::SimilarityGraph& graph);

struct IndicatorCodes {
  std::string total_assets = "BS_TOT_ASSET";
  std::string net_income = "NET_INCOME";
  std::string total_debts = "TOT_DEBT";
};

struct EconIndicators {
  std::string bank_id;
  std::optional<double> roa;       // net income / total assets
  std::optional<double> leverage;  // total debts / total assets
  double size = 0.0;               // total assets
};

/// Indicators for every bank with positive total assets in `year`.
std::vector<EconIndicators> economic_indicators(const std::vector<ingest::BankPanel>& panels,
                                                int year, const IndicatorCodes& codes);

struct CorrelationPoint {
  int year = 0;
  std::string x_name;
  std::string y_name;
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool significant = false;
};

/// Sample Pearson r with the two-sided t test t = r sqrt((n-2)/(1-r^2)) on
/// n-2 degrees of freedom. Throws InsufficientSample for n < 3 and
/// UndefinedCorrelation for a constant series.
CorrelationPoint pearson_with_test(std::span<const double> x, std::span<const double> y,
                                   double alpha = 0.05);

struct MeasurePair {
  std::string metric;     // strength | clustering
  std::string indicator;  // roa | leverage | size
};

/// (strength, leverage), (strength, size), (clustering, roa).
std::vector<MeasurePair> default_pairs();

struct SeriesEntry {
  int year = 0;
  MeasurePair pair;
  std::optional<CorrelationPoint> point;
  std::string skip_reason;  // set when `point` is empty
};

/// One correlation per (year, pair) between node metrics of that year's
/// graph and the banks' indicators. Banks lacking an indicator are dropped
/// for that pair only. Failures become skipped entries with a reason.
std::vector<SeriesEntry> yearly_correlation_series(
    const std::map<int, simgraph::SimilarityGraph>& graphs,
    const std::map<int, std::vector<EconIndicators>>& indicators,
    const std::vector<MeasurePair>& pairs, double alpha);

/// year,x_name,y_name,r,p_value,n,significant for computed entries.
std::string correlations_to_csv(const std::vector<SeriesEntry>& series);

}  // namespace acnet::netmetrics
