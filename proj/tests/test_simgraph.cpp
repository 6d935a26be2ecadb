#include "doctest.h"

#include <cmath>
#include <random>

#include "acnet/simgraph.hpp"
#include "acnet/synthgen.hpp"

using namespace acnet;
using namespace acnet::simgraph;

TEST_CASE("cosine similarity") {
  const std::vector<double> u{1, 0}, v{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}, w{0, 3};
  CHECK(cosine_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_similarity(u, w) == 0.0);
  CHECK(cosine_similarity(u, v) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));

  const std::vector<double> zero{0, 0};
  try {
    cosine_similarity(u, zero);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedSimilarity);
  }

  SUBCASE("positive rescaling invariance") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int t = 0; t < 200; ++t) {
      std::vector<double> a(12), b(12), a2(12);
      for (auto& x : a) x = g(rng);
      for (auto& x : b) x = g(rng);
      const double k = std::exp(g(rng) * 3);
      for (std::size_t i = 0; i < a.size(); ++i) a2[i] = a[i] * k;
      CHECK(cosine_similarity(a2, b) == doctest::Approx(cosine_similarity(a, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("metric weight") {
  CHECK(metric_weight(0.0) == 0.0);
  CHECK(metric_weight(1.0) == 1.0);
  CHECK(metric_weight(-1.0) == 1.0);
  CHECK(std::abs(metric_weight(0.8) - 0.4) <= 1e-15);
  CHECK(std::abs(metric_weight(0.6) - 0.2) <= 1e-15);
  CHECK(metric_weight(1.0 + 5e-10) == 1.0);
  try {
    metric_weight(1.0 + 1e-8);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK_THROWS_AS(metric_weight(std::nan("")), Error);

  SUBCASE("even and monotone in |c|") {
    double prev = -1;
    for (int i = 0; i <= 1000; ++i) {
      const double c = i / 1000.0;
      CHECK(metric_weight(c) == metric_weight(-c));
      CHECK(metric_weight(c) >= prev);
      prev = metric_weight(c);
    }
  }
}

TEST_CASE("permutation significance test") {
  const SignificanceConfig cfg{1000, 0.05};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;

  SUBCASE("identical vectors are significant") {
    std::vector<double> u(50);
    for (auto& x : u) x = g(rng);
    CHECK(significance_test(u, u, cfg, 1));
    CHECK(significance_test(u, u, cfg, 2));
  }
  SUBCASE("a constant vector is never significant") {
    std::vector<double> u(50), c(50, 2.5);
    for (auto& x : u) x = g(rng);
    for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK_FALSE(significance_test(u, c, cfg, seed));
  }
  SUBCASE("same seed, same verdict") {
    int agree = 0;
    for (int t = 0; t < 50; ++t) {
      std::vector<double> u(20), v(20);
      for (auto& x : u) x = g(rng);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] * 0.3 + g(rng);
      agree += significance_test(u, v, cfg, 99) == significance_test(u, v, cfg, 99);
    }
    CHECK(agree == 50);
  }
  SUBCASE("configuration bounds") {
    std::vector<double> u{1, 2, 3};
    CHECK_THROWS_AS(significance_test(u, u, SignificanceConfig{99, 0.05}, 1), Error);
    CHECK_THROWS_AS(significance_test(u, u, SignificanceConfig{100, 1.0}, 1), Error);
  }
}

TEST_CASE("pair seeds are symmetric and distinct") {
  CHECK(pair_seed(1, "A", "B") == pair_seed(1, "B", "A"));
  CHECK(pair_seed(1, "A", "B") != pair_seed(2, "A", "B"));
  CHECK(pair_seed(1, "AB", "C") != pair_seed(1, "A", "BC"));
  CHECK(derive_seed(1, "louvain", 2001) != derive_seed(1, "louvain", 2002));
}

TEST_CASE("graph construction") {
  SUBCASE("two identical banks form one weight-1 link") {
    features::FeatureMatrix m(2001, {"A", "B"}, {"x", "y", "z", "w", "v", "u"});
    const double row[] = {0.1, 0.5, 0.2, 0.9, 0.3, 0.05};
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 6; ++j) m.at(i, j) = row[j];
    const auto g = build_graph(m, SignificanceConfig{}, 1);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.edges()[0].weight == 1.0);
    CHECK(g.edges()[0].significant);
  }
  SUBCASE("planted groups: within-group links are heavier") {
    synthgen::SyntheticSpec spec;
    spec.n_banks = 24;
    spec.n_groups = 2;
    spec.missing_rate = 0.0;
    const auto syn = synthgen::generate(spec);
    Warnings w;
    const auto set = ingest::build_panels(syn.records, ingest::FilterConfig{}, w);
    const auto m = features::build_feature_matrix(set.panels, 2005, synthgen::kTotalAssets, w);
    const auto pairs = score_pairs(m, SignificanceConfig{}, 3);
    const std::size_t n = m.rows();
    CHECK(pairs.size() == n * (n - 1) / 2);
    double within = 0, between = 0;
    int nw = 0, nb = 0;
    for (const auto& e : pairs) {
      CHECK(e.u < e.v);
      CHECK(std::abs(e.weight - (1 - std::sqrt(1 - e.cosine * e.cosine))) <= 1e-12);
      if (syn.truth[e.u].group == syn.truth[e.v].group) {
        within += e.weight;
        ++nw;
      } else {
        between += e.weight;
        ++nb;
      }
    }
    CHECK(within / nw > between / nb);
    const auto g = graph_from_pairs(2005, m.bank_ids(), pairs);
    CHECK(g.edge_count() <= n * (n - 1) / 2);
    for (const auto& e : g.edges()) CHECK(e.significant);
  }
}

TEST_CASE("pruning") {
  SimilarityGraph g(2001, {"a", "b", "c", "d"});
  g.add_edge({0, 1, 0.9, metric_weight(0.9), true});
  g.add_edge({1, 2, 0.8, 0.4, true});
  g.add_edge({2, 3, 0.5, metric_weight(0.5), true});
  g.add_edge({0, 3, 0.99, metric_weight(0.99), true});
  CHECK_THROWS_AS(g.add_edge({2, 2, 1, 1, true}), Error);

  CHECK(prune(g, 0.0).edge_count() == g.edge_count());
  CHECK(prune(g, 1.0).edge_count() == 0);
  const auto p = prune(g, 0.4);
  CHECK(p.edge_count() == 3);

  SUBCASE("composition takes the larger threshold") {
    for (double t1 : {0.0, 0.2, 0.4, 0.6}) {
      for (double t2 : {0.0, 0.3, 0.4, 0.7}) {
        CHECK(prune(prune(g, t1), t2).edge_count() == prune(g, std::max(t1, t2)).edge_count());
      }
    }
  }
  SUBCASE("fragmentation warning") {
    Warnings w;
    prune(g, 0.0, &w);
    CHECK(w.empty());
    prune(g, 0.7, &w);
    CHECK(w.items.size() == 1);
    CHECK(largest_component_fraction(prune(g, 0.7)) == 0.5);
  }
}

TEST_CASE("edge list round trip") {
  std::vector<std::string> nodes{"a", "b", "c"};
  std::vector<Edge> pairs{{0, 1, 0.1234567890123, metric_weight(0.1234567890123), true},
                          {0, 2, -0.3, metric_weight(-0.3), false},
                          {1, 2, 0.77, metric_weight(0.77), true}};
  const auto tsv = pairs_to_tsv(nodes, pairs);
  const auto g = graph_from_tsv(2003, nodes, textio::parse_table(tsv, '\t'));
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edges()[0].weight == pairs[0].weight);
  CHECK(g.edges()[0].cosine == pairs[0].cosine);
  CHECK(g.edges()[1].v == 2);
}
