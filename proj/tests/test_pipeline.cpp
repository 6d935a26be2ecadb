#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "acnet/pipeline.hpp"
#include "acnet/synthgen.hpp"
#include "acnet/textio.hpp"

using namespace acnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("acnet_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small synthetic panel written to `dir/statements.csv`.
PipelineConfig small_setup(const fs::path& dir, int banks = 18) {
  synthgen::SyntheticSpec spec;
  spec.n_banks = banks;
  spec.n_variables = 10;
  spec.first_year = 2001;
  spec.last_year = 2013;
  spec.rng_seed = 5;
  const auto syn = synthgen::generate(spec);
  textio::write_file_atomic(dir / "statements.csv", synthgen::records_to_csv(syn.records));
  PipelineConfig cfg;
  cfg.input = dir / "statements.csv";
  cfg.out = dir / "out";
  cfg.mc_samples = 200;
  return cfg;
}

std::vector<fs::path> report_files(const fs::path& out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (e.is_regular_file() && e.path().filename() != pipeline::files::kManifest) {
      files.push_back(fs::relative(e.path(), out));
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ACNET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config text round trip and overrides") {
  PipelineConfig cfg;
  cfg.set("qr", "0.7");
  cfg.set("prune", "0.35, 0.4");
  cfg.set("periods", "2001-2005,2006-2013");
  cfg.set("seed", "9");
  cfg.set("redundant_codes", "A,B");
  const auto text = cfg.to_text();
  PipelineConfig back;
  for (const auto& [k, v] : parse_key_values(text)) back.set(k, v);
  CHECK(back.to_text() == text);
  CHECK(back.filter.qr_threshold == 0.7);
  CHECK(back.prune == std::vector<double>{0.35, 0.4});
  CHECK(back.seed == 9);

  CHECK_THROWS_AS(cfg.set("bogus", "1"), Error);
  CHECK_THROWS_AS(cfg.set("qr", "abc"), Error);
  PipelineConfig bad;
  bad.prune = {0.5, 0.4};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.prune = {0.4};
  bad.mc_samples = 50;
  CHECK_THROWS_AS(bad.validate(), Error);
  const auto kv = parse_key_values("# comment\n\n a = 1 # trailing\nb=x\n");
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "x");
}

TEST_CASE("full run writes every report") {
  const auto dir = scratch("full");
  const auto cfg = small_setup(dir);
  const auto summary = pipeline::run_pipeline(cfg);
  CHECK(summary.banks_total == 18);
  CHECK(summary.banks_kept > 0);
  for (const char* f : {pipeline::files::kPanel, pipeline::files::kBanks, pipeline::files::kPartitions,
                        pipeline::files::kPartitionSummary, pipeline::files::kCorrelations,
                        pipeline::files::kPcaRankings, pipeline::files::kQrSweep, pipeline::files::kManifest}) {
    CHECK_MESSAGE(fs::exists(cfg.out / f), f);
  }
  for (int y = 2001; y <= 2013; ++y) {
    CHECK(fs::exists(pipeline::files::features(cfg.out, y)));
    CHECK(fs::exists(pipeline::files::edges(cfg.out, y)));
  }
  const auto manifest = slurp(cfg.out / pipeline::files::kManifest);
  CHECK(manifest.find("seed = 42") != std::string::npos);

  SUBCASE("the manifest replays the run") {
    const auto replay_dir = scratch("replay");
    textio::write_file_atomic(replay_dir / "run.conf", manifest);
    auto replay = load_config(replay_dir / "run.conf");
    CHECK(replay.to_text() == cfg.to_text());
  }
}

TEST_CASE("strict filters leave an empty but well-formed run") {
  const auto dir = scratch("empty");
  auto cfg = small_setup(dir, 6);
  cfg.filter.qr_threshold = 0.999;
  const auto summary = pipeline::run_pipeline(cfg);
  CHECK(summary.banks_kept == 0);
  CHECK(fs::exists(cfg.out / pipeline::files::kManifest));
  const auto panel = textio::read_table(cfg.out / pipeline::files::kPanel, ',');
  CHECK(panel.rows.empty());
}

TEST_CASE("threshold sweep reports one summary per threshold and year") {
  const auto dir = scratch("sweep");
  auto cfg = small_setup(dir);
  cfg.prune = {0.35, 0.4, 0.45, 0.5};
  pipeline::run_pipeline(cfg);
  const auto t = textio::read_table(cfg.out / pipeline::files::kPartitionSummary, ',');
  CHECK(t.rows.size() == 4u * 13u);
}

TEST_CASE("staged and monolithic runs produce identical reports") {
  const auto dir = scratch("staged");
  auto cfg = small_setup(dir);
  pipeline::run_pipeline(cfg);
  const auto mono = cfg.out;

  cfg.out = dir / "staged";
  Warnings w;
  pipeline::write_ingest(cfg, pipeline::run_ingest(cfg, w));
  pipeline::write_graphs(cfg, pipeline::run_graphs(cfg, pipeline::load_panels(cfg), w));
  pipeline::write_communities(cfg, pipeline::run_communities(cfg, pipeline::load_graphs(cfg), w));
  pipeline::write_correlations(
      cfg, pipeline::run_correlations(cfg, pipeline::load_panels(cfg), pipeline::load_graphs(cfg), w));
  pipeline::write_pca(cfg, pipeline::run_pca(cfg, pipeline::load_panels(cfg), pipeline::load_partitions(cfg), w));
  pipeline::write_qr_sweep(cfg, pipeline::run_qr_sweep(cfg, pipeline::run_ingest(cfg, w).all));

  const auto a = report_files(mono);
  const auto b = report_files(cfg.out);
  REQUIRE(a == b);
  for (const auto& f : a) CHECK_MESSAGE(slurp(mono / f) == slurp(cfg.out / f), f.string());
}

TEST_CASE("stages report missing prerequisites") {
  const auto dir = scratch("prereq");
  auto cfg = small_setup(dir);
  try {
    pipeline::load_partitions(cfg);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingPrerequisite);
    CHECK(std::string(e.what()).find("communities") != std::string::npos);
  }
  CHECK_THROWS_AS(pipeline::load_panels(cfg), Error);
  CHECK_THROWS_AS(pipeline::load_graphs(cfg), Error);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  const auto cfg = small_setup(dir, 8);
  const std::string in = " --input " + cfg.input.string() + " --out " + (dir / "o").string();
  CHECK(run_cli("ingest-check" + in) == 0);
  CHECK(run_cli("pca" + in) == exit_code(ErrorKind::MissingPrerequisite));
  CHECK(run_cli("ingest-check" + in + " --qr 1.5") == 1);
  CHECK(run_cli("ingest-check --input " + (dir / "nope.csv").string()) == 2);
  CHECK(run_cli("frobnicate") == 1);
  textio::write_file_atomic(dir / "bad.csv",
                            "bank_id,country,statement_date,variable_code,value\nB1,US,2005-13-01,X,1\n");
  CHECK(run_cli("ingest-check --input " + (dir / "bad.csv").string() + " --out " + (dir / "o2").string()) == 1);
  CHECK(run_cli("generate --out " + (dir / "gen").string() + " --banks 5") == 0);
  CHECK(fs::exists(dir / "gen" / "truth.csv"));
}
