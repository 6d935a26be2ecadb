#include "acnet/pipeline.hpp"

#include <algorithm>
#include <set>

#include "acnet/textio.hpp"

namespace acnet::pipeline {

namespace fs = std::filesystem;

namespace files {
fs::path features(const fs::path& out, int year) {
  return out / "features" / ("features_" + std::to_string(year) + ".csv");
}
fs::path edges(const fs::path& out, int year) {
  return out / "edges" / ("edges_" + std::to_string(year) + ".tsv");
}
}  // namespace files

namespace {

void require_file(const fs::path& path, const char* producer) {
  if (!fs::exists(path)) {
    throw Error(ErrorKind::MissingPrerequisite, "missing artifact '" + path.string() +
                                                    "'; run the '" + producer + "' stage first");
  }
}

std::uint64_t graph_seed(const PipelineConfig& c) { return simgraph::derive_seed(c.seed, "graph"); }
std::uint64_t louvain_seed(const PipelineConfig& c, int year) {
  return simgraph::derive_seed(c.seed, "louvain", year);
}

}  // namespace

IngestOutput run_ingest(const PipelineConfig& config, Warnings& warnings) {
  if (config.input.empty()) throw Error(ErrorKind::Config, "no input file given");
  const auto parsed = ingest::read_statements(config.input);
  ingest::require_clean(parsed);
  auto records = ingest::drop_redundant_variables(parsed.records, config.redundant_codes,
                                                  config.codes.total_assets, warnings);
  IngestOutput out;
  out.record_count = parsed.records.size();
  auto panels = ingest::build_panels(records, config.filter, warnings);
  out.all = std::move(panels.panels);
  out.kept = ingest::filter_banks(out.all, config.filter);
  if (out.kept.empty()) warnings.add("no bank passes the filters; reports will be empty");
  return out;
}

void write_ingest(const PipelineConfig& config, const IngestOutput& result) {
  textio::write_file_atomic(config.out / files::kPanel, ingest::panels_to_csv(result.kept));
  textio::write_file_atomic(config.out / files::kBanks,
                            ingest::bank_report_csv(result.all, result.kept));
}

std::vector<ingest::BankPanel> load_panels(const PipelineConfig& config) {
  const auto path = config.out / files::kPanel;
  require_file(path, "ingest-check");
  return ingest::panels_from_csv(textio::read_table(path, ','));
}

std::map<int, YearGraph> run_graphs(const PipelineConfig& config,
                                    const std::vector<ingest::BankPanel>& kept, Warnings& warnings) {
  const simgraph::SignificanceConfig sig{config.mc_samples, config.alpha};
  std::map<int, YearGraph> out;
  for (int y = config.filter.sample_start_year; y <= config.filter.sample_end_year; ++y) {
    YearGraph yg;
    yg.matrix = features::build_feature_matrix(kept, y, config.codes.total_assets, warnings);
    yg.pairs = simgraph::score_pairs(yg.matrix, sig, graph_seed(config));
    yg.graph = simgraph::graph_from_pairs(y, yg.matrix.bank_ids(), yg.pairs);
    out.emplace(y, std::move(yg));
  }
  return out;
}

void write_graphs(const PipelineConfig& config, const std::map<int, YearGraph>& graphs) {
  for (const auto& [year, yg] : graphs) {
    textio::write_file_atomic(files::features(config.out, year), features::matrix_to_csv(yg.matrix));
    textio::write_file_atomic(files::edges(config.out, year),
                              simgraph::pairs_to_tsv(yg.matrix.bank_ids(), yg.pairs));
  }
}

std::map<int, simgraph::SimilarityGraph> load_graphs(const PipelineConfig& config) {
  std::map<int, simgraph::SimilarityGraph> out;
  for (int y = config.filter.sample_start_year; y <= config.filter.sample_end_year; ++y) {
    const auto fpath = files::features(config.out, y);
    const auto epath = files::edges(config.out, y);
    require_file(fpath, "build-graphs");
    require_file(epath, "build-graphs");
    const auto ftable = textio::read_table(fpath, ',');
    std::vector<std::string> nodes;
    for (const auto& row : ftable.rows) nodes.push_back(row.fields.at(0));
    out.emplace(y, simgraph::graph_from_tsv(y, std::move(nodes), textio::read_table(epath, '\t')));
  }
  return out;
}

CommunityOutput run_communities(const PipelineConfig& config,
                                const std::map<int, simgraph::SimilarityGraph>& graphs,
                                Warnings& warnings) {
  CommunityOutput out;
  out.sweeps.resize(config.prune.size());
  std::vector<std::map<std::string, int>> previous(config.prune.size());
  std::vector<int> next_label(config.prune.size(), 0);

  for (const auto& [year, graph] : graphs) {
    out.nodes[year] = graph.nodes();
    auto points = community::threshold_sweep(graph, config.prune, louvain_seed(config, year), &warnings);
    for (std::size_t t = 0; t < points.size(); ++t) {
      auto& point = points[t];
      if (point.partition) {
        auto aligned = community::align_labels(previous[t], graph.nodes(),
                                                point.partition->assignment, next_label[t]);
        point.partition->assignment = std::move(aligned);
        previous[t].clear();
        for (std::size_t i = 0; i < graph.node_count(); ++i) {
          previous[t][graph.nodes()[i]] = point.partition->assignment[i];
        }
        if (t == 0) out.primary[year] = previous[t];
      }
      out.sweeps[t].emplace(year, std::move(point));
    }
  }
  return out;
}

void write_communities(const PipelineConfig& config, const CommunityOutput& result) {
  std::string parts = "year,threshold,bank_id,community_id\n";
  std::string summary = "year,threshold,modularity,n_communities,largest_component_fraction\n";
  std::set<int> years;
  for (const auto& sweep : result.sweeps) {
    for (const auto& [y, p] : sweep) years.insert(y);
  }
  for (int year : years) {
    const auto& nodes = result.nodes.at(year);
    for (const auto& sweep : result.sweeps) {
      const auto& point = sweep.at(year);
      const std::string t = textio::format_double(point.threshold);
      const std::string lcf = textio::format_double(point.largest_component_fraction);
      if (point.partition) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          parts += textio::join_record({std::to_string(year), t, nodes[i],
                                        std::to_string(point.partition->assignment[i])},
                                       ',') + "\n";
        }
        summary += textio::join_record({std::to_string(year), t,
                                        textio::format_double(point.partition->modularity),
                                        std::to_string(point.partition->community_count()), lcf},
                                       ',') + "\n";
      } else {
        summary += textio::join_record({std::to_string(year), t, "NA", "0", lcf}, ',') + "\n";
      }
    }
  }
  textio::write_file_atomic(config.out / files::kPartitions, parts);
  textio::write_file_atomic(config.out / files::kPartitionSummary, summary);
}

YearLabels load_partitions(const PipelineConfig& config) {
  const auto path = config.out / files::kPartitions;
  require_file(path, "communities");
  const auto table = textio::read_table(path, ',');
  const auto c_year = table.column("year");
  const auto c_t = table.column("threshold");
  const auto c_bank = table.column("bank_id");
  const auto c_comm = table.column("community_id");
  const std::string primary = textio::format_double(config.analysis_threshold());
  YearLabels out;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw Error(ErrorKind::Parse, "partitions line " + std::to_string(row.line) + ": wrong field count");
    }
    if (row.fields[c_t] != primary) continue;
    long long year = 0, comm = 0;
    if (!textio::parse_int(row.fields[c_year], year) || !textio::parse_int(row.fields[c_comm], comm)) {
      throw Error(ErrorKind::Parse, "partitions line " + std::to_string(row.line) + ": bad integer");
    }
    out[static_cast<int>(year)][row.fields[c_bank]] = static_cast<int>(comm);
  }
  return out;
}

std::vector<netmetrics::SeriesEntry> run_correlations(
    const PipelineConfig& config, const std::vector<ingest::BankPanel>& kept,
    const std::map<int, simgraph::SimilarityGraph>& graphs, Warnings& warnings) {
  std::map<int, simgraph::SimilarityGraph> pruned;
  std::map<int, std::vector<netmetrics::EconIndicators>> indicators;
  for (const auto& [year, graph] : graphs) {
    if (graph.node_count() == 0) continue;
    pruned.emplace(year, simgraph::prune(graph, config.analysis_threshold()));
    indicators[year] = netmetrics::economic_indicators(kept, year, config.codes);
  }
  auto series = netmetrics::yearly_correlation_series(pruned, indicators, netmetrics::default_pairs(),
                                                      config.corr_alpha);
  for (const auto& e : series) {
    if (!e.point) {
      warnings.add("correlation " + std::to_string(e.year) + " " + e.pair.metric + "~" +
                   e.pair.indicator + " skipped: " + e.skip_reason);
    }
  }
  return series;
}

void write_correlations(const PipelineConfig& config,
                        const std::vector<netmetrics::SeriesEntry>& series) {
  textio::write_file_atomic(config.out / files::kCorrelations, netmetrics::correlations_to_csv(series));
}

pca::MeasureSpec measure_spec(const PipelineConfig& config,
                              const std::vector<ingest::BankPanel>& kept) {
  Warnings scratch;
  std::vector<features::FeatureMatrix> matrices;
  for (int y = config.filter.sample_start_year; y <= config.filter.sample_end_year; ++y) {
    matrices.push_back(features::build_feature_matrix(kept, y, config.codes.total_assets, scratch));
  }
  pca::MeasureSpec spec;
  spec.ratio_codes = features::popular_variables(matrices, config.presence);
  spec.total_assets_code = config.codes.total_assets;
  // Leverage is carried by its derived measure; its raw ratio would duplicate it.
  spec.ratio_codes.erase(config.codes.total_debts);
  spec.derived.push_back({"TOT_DEBT_TO_TOT_ASSET", config.codes.total_debts, config.codes.total_assets});
  if (!config.equity_code.empty()) {
    spec.derived.push_back({"RETURN_ON_CAP", config.codes.net_income, config.equity_code});
  }
  return spec;
}

pca::RankingResult run_pca(const PipelineConfig& config, const std::vector<ingest::BankPanel>& kept,
                           const YearLabels& labels, Warnings& warnings) {
  const auto spec = measure_spec(config, kept);
  const auto codes = spec.measure_codes();
  std::map<std::string, const ingest::BankPanel*> by_id;
  for (const auto& p : kept) by_id[p.bank_id] = &p;

  std::vector<pca::YearContributions> yearly;
  for (const auto& [year, assignment] : labels) {
    std::map<int, std::vector<const ingest::BankPanel*>> members;
    for (const auto& [bank, comm] : assignment) {
      auto it = by_id.find(bank);
      if (it != by_id.end() && it->second->years.count(year)) members[comm].push_back(it->second);
    }
    for (const auto& [comm, list] : members) {
      const std::string where = "community " + std::to_string(comm) + " year " + std::to_string(year);
      pca::PcaModel model;
      try {
        Warnings fit_warnings;
        model = pca::fit_scaled_pca(pca::measure_table(list, year, spec), codes, &fit_warnings);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
        warnings.add("PCA " + where + " skipped: " + e.what());
        continue;
      }
      if (model.retained < 1) {
        warnings.add("PCA " + where + ": no eigenvalue above 1; first component retained");
        model = pca::retain_at_least(std::move(model), 1);
      }
      yearly.push_back({comm, year, pca::measure_contributions(model)});
    }
  }
  auto result = pca::period_rankings(yearly, config.periods);
  for (const auto& s : result.skipped) {
    warnings.add("PCA ranking community " + std::to_string(s.community_id) + " period " +
                 s.period.label() + " skipped: " + s.reason);
  }
  return result;
}

void write_pca(const PipelineConfig& config, const pca::RankingResult& result) {
  textio::write_file_atomic(config.out / files::kPcaRankings, pca::rankings_to_csv(result.rankings));
}

std::vector<ingest::QrSweepRow> run_qr_sweep(const PipelineConfig& config,
                                             const std::vector<ingest::BankPanel>& all) {
  const simgraph::SignificanceConfig sig{config.mc_samples, config.alpha};
  const auto seed = graph_seed(config);
  auto counter = [&](const std::vector<ingest::BankPanel>& kept, int year) {
    Warnings scratch;
    const auto m = features::build_feature_matrix(kept, year, config.codes.total_assets, scratch);
    const auto g = simgraph::build_graph(m, sig, seed);
    return ingest::GraphCounts{g.node_count(), g.edge_count()};
  };
  return ingest::qr_sweep(all, config.qr_sweep, config.filter, counter);
}

void write_qr_sweep(const PipelineConfig& config, const std::vector<ingest::QrSweepRow>& rows) {
  std::string out = "threshold,year,node_count,edge_count\n";
  for (const auto& r : rows) {
    out += textio::format_double(r.threshold) + "," + std::to_string(r.year) + "," +
           std::to_string(r.node_count) + "," + std::to_string(r.edge_count) + "\n";
  }
  textio::write_file_atomic(config.out / files::kQrSweep, out);
}

RunSummary run_pipeline(const PipelineConfig& config) {
  staged("config", [&] { config.validate(); });
  RunSummary summary;
  auto& w = summary.warnings;

  const auto ingested = staged("ingest", [&] { return run_ingest(config, w); });
  summary.records = ingested.record_count;
  summary.banks_total = ingested.all.size();
  summary.banks_kept = ingested.kept.size();

  const auto graphs = staged("build-graphs", [&] { return run_graphs(config, ingested.kept, w); });
  std::map<int, simgraph::SimilarityGraph> plain;
  for (const auto& [y, yg] : graphs) plain.emplace(y, yg.graph);

  const auto comms = staged("communities", [&] { return run_communities(config, plain, w); });
  const auto series = staged("correlations", [&] { return run_correlations(config, ingested.kept, plain, w); });
  const auto rankings = staged("pca", [&] { return run_pca(config, ingested.kept, comms.primary, w); });
  const auto sweep = staged("sweep-qr", [&] { return run_qr_sweep(config, ingested.all); });

  staged("write", [&] {
    write_ingest(config, ingested);
    write_graphs(config, graphs);
    write_communities(config, comms);
    write_correlations(config, series);
    write_pca(config, rankings);
    write_qr_sweep(config, sweep);

    std::string manifest = config.to_text();
    manifest += "# records = " + std::to_string(summary.records) + "\n";
    manifest += "# banks_total = " + std::to_string(summary.banks_total) + "\n";
    manifest += "# banks_kept = " + std::to_string(summary.banks_kept) + "\n";
    manifest += "# missing_value_policy = zero-fill after normalization\n";
    for (const auto& [y, yg] : graphs) {
      manifest += "# year " + std::to_string(y) + ": nodes = " + std::to_string(yg.graph.node_count()) +
                  ", edges = " + std::to_string(yg.graph.edge_count()) + "\n";
    }
    manifest += "# warnings = " + std::to_string(w.items.size()) + "\n";
    for (const auto& item : w.items) manifest += "# warning: " + item + "\n";
    textio::write_file_atomic(config.out / files::kManifest, manifest);
  });
  return summary;
}

}  // namespace acnet::pipeline
