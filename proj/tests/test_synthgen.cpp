#include "doctest.h"

#include <cmath>

#include "acnet/community.hpp"
#include "acnet/features.hpp"
#include "acnet/simgraph.hpp"
#include "acnet/synthgen.hpp"

using namespace acnet;
using namespace acnet::synthgen;

TEST_CASE("no missingness gives full quality ratios") {
  SyntheticSpec spec;
  spec.n_banks = 12;
  spec.missing_rate = 0.0;
  const auto syn = generate(spec);
  CHECK(syn.records.size() == 12u * 21u * 13u);
  for (const auto& t : syn.truth) CHECK(t.quality_ratio == 1.0);

  Warnings w;
  const auto set = ingest::build_panels(syn.records, ingest::FilterConfig{}, w);
  REQUIRE(set.panels.size() == 12);
  for (const auto& p : set.panels) {
    CHECK(p.years.size() == 13);
    CHECK(ingest::compute_quality_ratio(p, set.retained_codes, 2001, 2013) == 1.0);
  }
}

TEST_CASE("identical templates without noise collapse to one community") {
  SyntheticSpec spec;
  spec.n_banks = 10;
  spec.n_groups = 2;
  spec.within_noise = 0.0;
  spec.between_separation = 0.0;
  spec.missing_rate = 0.0;
  const auto syn = generate(spec);
  Warnings w;
  const auto set = ingest::build_panels(syn.records, ingest::FilterConfig{}, w);
  const auto m = features::build_feature_matrix(set.panels, 2007, kTotalAssets, w);
  const auto pairs = simgraph::score_pairs(m, simgraph::SignificanceConfig{}, 1);
  for (const auto& e : pairs) {
    CHECK(e.cosine == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.weight == doctest::Approx(1.0).epsilon(1e-6));
  }
  const auto g = simgraph::graph_from_pairs(2007, m.bank_ids(), pairs);
  const auto p = community::louvain(g, 3);
  CHECK(p.community_count() == 1);
}

TEST_CASE("generation is deterministic per seed") {
  SyntheticSpec spec;
  spec.n_banks = 15;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(records_to_csv(a.records) == records_to_csv(b.records));
  CHECK(truth_to_csv(a.truth) == truth_to_csv(b.truth));
  spec.rng_seed = 2;
  CHECK(records_to_csv(generate(spec).records) != records_to_csv(a.records));
}

TEST_CASE("empirical missing rate converges to the configured rate") {
  SyntheticSpec spec;
  spec.n_banks = 80;
  spec.n_variables = 30;
  spec.missing_rate = 0.2;
  const auto syn = generate(spec);
  const double trials = 80.0 * 30.0 * 13.0;
  const double emitted = static_cast<double>(syn.records.size()) - 80.0 * 13.0;
  const double observed = 1.0 - emitted / trials;
  const double sigma = std::sqrt(0.2 * 0.8 / trials);
  CHECK(std::abs(observed - 0.2) <= 3 * sigma);
}

TEST_CASE("ground truth labels and file formats") {
  SyntheticSpec spec;
  spec.n_banks = 7;
  spec.n_groups = 3;
  const auto syn = generate(spec);
  REQUIRE(syn.truth.size() == 7);
  CHECK(syn.truth[0].bank_id == "B000");
  CHECK(syn.truth[4].group == 1);
  const auto parsed = ingest::parse_statements(textio::parse_table(records_to_csv(syn.records), ','));
  CHECK(parsed.rejections.empty());
  CHECK(parsed.records.size() == syn.records.size());
  CHECK(variable_codes(4) == std::vector<std::string>{"NET_INCOME", "TOT_DEBT", "TOT_EQUITY", "VAR_004"});
}

TEST_CASE("spec validation") {
  auto bad = [](auto mutate) {
    SyntheticSpec s;
    mutate(s);
    CHECK_THROWS_AS(s.validate(), Error);
  };
  bad([](SyntheticSpec& s) { s.n_banks = 0; });
  bad([](SyntheticSpec& s) { s.n_groups = 61; });
  bad([](SyntheticSpec& s) { s.missing_rate = 1.0; });
  bad([](SyntheticSpec& s) { s.missing_rate = 0.6; s.missing_rate_spread = 0.5; });
  bad([](SyntheticSpec& s) { s.last_year = 2000; });
  bad([](SyntheticSpec& s) { s.within_noise = -1; });
  CHECK_NOTHROW(SyntheticSpec{}.validate());
}
