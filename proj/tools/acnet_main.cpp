// acnet: accounting-network pipeline driver.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "acnet/config.hpp"
#include "acnet/pipeline.hpp"
#include "acnet/synthgen.hpp"
#include "acnet/textio.hpp"

namespace {

using namespace acnet;

// Flag values collected before the config is assembled; flags win over the
// config file.
struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_pipeline_flags(CLI::App* cmd, Overrides& ov) {
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        name, [&ov, key](const std::string& v) { ov.values[key] = v; }, help);
  };
  cmd->add_option("--config", ov.config_path, "key = value configuration file");
  flag("--input", "input", "statement CSV (bank_id,country,statement_date,variable_code,value)");
  flag("--out", "out", "output directory");
  flag("--qr", "qr", "Quality Ratio threshold");
  flag("--min-statements", "min_statements", "minimum number of annual statements");
  flag("--max-gap-days", "max_gap_days", "maximum days between consecutive statements");
  flag("--mc-samples", "mc_samples", "Monte Carlo permutations per link");
  flag("--alpha", "alpha", "link significance level");
  flag("--prune", "prune", "pruning threshold or ascending comma list");
  flag("--presence", "presence", "presence fraction for PCA measures");
  flag("--periods", "periods", "PCA periods, e.g. 2001-2006,2007-2009,2010-2013");
  flag("--seed", "seed", "root random seed");
  flag("--qr-sweep", "qr_sweep", "ascending QR thresholds for sweep-qr");
}

PipelineConfig assemble(const Overrides& ov) {
  PipelineConfig cfg = ov.config_path.empty() ? PipelineConfig{} : load_config(ov.config_path);
  for (const auto& [k, v] : ov.values) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

void report(const Warnings& w) {
  for (const auto& item : w.items) std::cerr << "warning: " << item << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Accounting-network construction and analysis"};
  app.require_subcommand(1);

  Overrides ov;
  auto* cmd_run = app.add_subcommand("run", "full pipeline with every report and the manifest");
  auto* cmd_ingest = app.add_subcommand("ingest-check", "parse, validate and filter the input panel");
  auto* cmd_graphs = app.add_subcommand("build-graphs", "feature matrices and significance-filtered edges");
  auto* cmd_comm = app.add_subcommand("communities", "Louvain partitions over the pruning thresholds");
  auto* cmd_corr = app.add_subcommand("correlations", "network metric vs indicator correlations");
  auto* cmd_pca = app.add_subcommand("pca", "community PCA contribution rankings");
  auto* cmd_sweep = app.add_subcommand("sweep-qr", "node and edge counts across QR thresholds");
  for (auto* c : {cmd_run, cmd_ingest, cmd_graphs, cmd_comm, cmd_corr, cmd_pca, cmd_sweep}) {
    add_pipeline_flags(c, ov);
  }

  auto* cmd_gen = app.add_subcommand("generate", "write a synthetic statement panel");
  synthgen::SyntheticSpec spec;
  std::string gen_out = "synthetic";
  cmd_gen->add_option("--out", gen_out, "output directory (statements.csv, truth.csv)");
  cmd_gen->add_option("--seed", spec.rng_seed, "random seed");
  cmd_gen->add_option("--banks", spec.n_banks, "number of banks");
  cmd_gen->add_option("--groups", spec.n_groups, "number of planted groups");
  cmd_gen->add_option("--variables", spec.n_variables, "statement variables besides total assets");
  cmd_gen->add_option("--first-year", spec.first_year, "first fiscal year");
  cmd_gen->add_option("--last-year", spec.last_year, "last fiscal year");
  cmd_gen->add_option("--noise", spec.within_noise, "within-group noise scale");
  cmd_gen->add_option("--separation", spec.between_separation, "between-group template spread");
  cmd_gen->add_option("--missing", spec.missing_rate, "missing observation rate");
  cmd_gen->add_option("--missing-spread", spec.missing_rate_spread, "per-bank extra missing rate range");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_gen->parsed()) {
      const auto panel = synthgen::generate(spec);
      const std::filesystem::path dir = gen_out;
      textio::write_file_atomic(dir / "statements.csv", synthgen::records_to_csv(panel.records));
      textio::write_file_atomic(dir / "truth.csv", synthgen::truth_to_csv(panel.truth));
      std::cout << "wrote " << panel.records.size() << " records for " << panel.truth.size()
                << " banks to " << dir.string() << "\n";
      return 0;
    }

    const PipelineConfig cfg = pipeline::staged("config", [&] { return assemble(ov); });
    Warnings w;

    if (cmd_run->parsed()) {
      const auto summary = pipeline::run_pipeline(cfg);
      report(summary.warnings);
      std::cout << "banks kept " << summary.banks_kept << "/" << summary.banks_total << "; reports in "
                << cfg.out.string() << "\n";
    } else if (cmd_ingest->parsed()) {
      const auto result = pipeline::staged("ingest", [&] {
        if (cfg.input.empty()) throw Error(ErrorKind::Config, "no input file given");
        const auto parsed = ingest::read_statements(cfg.input);
        for (const auto& r : parsed.rejections) {
          std::cerr << cfg.input.string() << ":" << r.line << ": " << r.reason << "\n";
        }
        return pipeline::run_ingest(cfg, w);
      });
      pipeline::staged("ingest", [&] { pipeline::write_ingest(cfg, result); });
      report(w);
      std::cout << result.record_count << " records, " << result.kept.size() << "/" << result.all.size()
                << " banks retained\n";
    } else if (cmd_graphs->parsed()) {
      pipeline::staged("build-graphs", [&] {
        const auto kept = pipeline::load_panels(cfg);
        pipeline::write_graphs(cfg, pipeline::run_graphs(cfg, kept, w));
      });
      report(w);
    } else if (cmd_comm->parsed()) {
      pipeline::staged("communities", [&] {
        const auto graphs = pipeline::load_graphs(cfg);
        pipeline::write_communities(cfg, pipeline::run_communities(cfg, graphs, w));
      });
      report(w);
    } else if (cmd_corr->parsed()) {
      pipeline::staged("correlations", [&] {
        const auto kept = pipeline::load_panels(cfg);
        const auto graphs = pipeline::load_graphs(cfg);
        pipeline::write_correlations(cfg, pipeline::run_correlations(cfg, kept, graphs, w));
      });
      report(w);
    } else if (cmd_pca->parsed()) {
      pipeline::staged("pca", [&] {
        const auto labels = pipeline::load_partitions(cfg);
        const auto kept = pipeline::load_panels(cfg);
        pipeline::write_pca(cfg, pipeline::run_pca(cfg, kept, labels, w));
      });
      report(w);
    } else if (cmd_sweep->parsed()) {
      pipeline::staged("sweep-qr", [&] {
        const auto ingested = pipeline::run_ingest(cfg, w);
        pipeline::write_qr_sweep(cfg, pipeline::run_qr_sweep(cfg, ingested.all));
      });
      report(w);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
