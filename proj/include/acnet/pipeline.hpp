#pragma once

// Stage orchestration. Every stage has a compute step and a write step; the
// staged subcommands reload the previous stage's files, the full run passes
// results in memory. Both routes produce identical report bytes.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "acnet/community.hpp"
#include "acnet/config.hpp"
#include "acnet/features.hpp"
#include "acnet/ingest.hpp"
#include "acnet/netmetrics.hpp"
#include "acnet/pca.hpp"
#include "acnet/simgraph.hpp"

namespace acnet::pipeline {

namespace files {
inline constexpr const char* kPanel = "panel.csv";
inline constexpr const char* kBanks = "banks.csv";
inline constexpr const char* kPartitions = "partitions.csv";
inline constexpr const char* kPartitionSummary = "partition_summary.csv";
inline constexpr const char* kCorrelations = "correlations.csv";
inline constexpr const char* kPcaRankings = "pca_rankings.csv";
inline constexpr const char* kQrSweep = "qr_sweep.csv";
inline constexpr const char* kManifest = "manifest.txt";
std::filesystem::path features(const std::filesystem::path& out, int year);
std::filesystem::path edges(const std::filesystem::path& out, int year);
}  // namespace files

/// Runs `body`, prefixing any error message with the stage name.
template <class F>
auto staged(const char* stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("[") + stage + "] " + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(ErrorKind::Io, std::string("[") + stage + "] " + e.what());
  }
}

struct IngestOutput {
  std::size_t record_count = 0;
  std::vector<ingest::BankPanel> all;   // every bank in the sample period
  std::vector<ingest::BankPanel> kept;  // after filter_banks
};

IngestOutput run_ingest(const PipelineConfig& config, Warnings& warnings);
void write_ingest(const PipelineConfig& config, const IngestOutput& result);
/// Reloads the filtered panel written by write_ingest.
std::vector<ingest::BankPanel> load_panels(const PipelineConfig& config);

struct YearGraph {
  features::FeatureMatrix matrix;
  std::vector<simgraph::Edge> pairs;  // every scored pair, significant or not
  simgraph::SimilarityGraph graph;    // significant links only
};

std::map<int, YearGraph> run_graphs(const PipelineConfig& config,
                                    const std::vector<ingest::BankPanel>& kept, Warnings& warnings);
void write_graphs(const PipelineConfig& config, const std::map<int, YearGraph>& graphs);
std::map<int, simgraph::SimilarityGraph> load_graphs(const PipelineConfig& config);

/// Bank -> aligned community label, per year.
using YearLabels = std::map<int, std::map<std::string, int>>;

struct CommunityOutput {
  // threshold index -> year -> sweep point (labels already aligned across years)
  std::vector<std::map<int, community::SweepPoint>> sweeps;
  std::map<int, std::vector<std::string>> nodes;
  YearLabels primary;  // labels at the analysis threshold
};

CommunityOutput run_communities(const PipelineConfig& config,
                                const std::map<int, simgraph::SimilarityGraph>& graphs,
                                Warnings& warnings);
void write_communities(const PipelineConfig& config, const CommunityOutput& result);
YearLabels load_partitions(const PipelineConfig& config);

std::vector<netmetrics::SeriesEntry> run_correlations(
    const PipelineConfig& config, const std::vector<ingest::BankPanel>& kept,
    const std::map<int, simgraph::SimilarityGraph>& graphs, Warnings& warnings);
void write_correlations(const PipelineConfig& config,
                        const std::vector<netmetrics::SeriesEntry>& series);

pca::MeasureSpec measure_spec(const PipelineConfig& config,
                              const std::vector<ingest::BankPanel>& kept);
pca::RankingResult run_pca(const PipelineConfig& config, const std::vector<ingest::BankPanel>& kept,
                           const YearLabels& labels, Warnings& warnings);
void write_pca(const PipelineConfig& config, const pca::RankingResult& result);

std::vector<ingest::QrSweepRow> run_qr_sweep(const PipelineConfig& config,
                                             const std::vector<ingest::BankPanel>& all);
void write_qr_sweep(const PipelineConfig& config, const std::vector<ingest::QrSweepRow>& rows);

struct RunSummary {
  std::size_t records = 0;
  std::size_t banks_total = 0;
  std::size_t banks_kept = 0;
  Warnings warnings;
};

/// Every stage in memory, then every report plus the manifest.
RunSummary run_pipeline(const PipelineConfig& config);

}  // namespace acnet::pipeline
