#include "doctest.h"

#include <cmath>
#include <random>

#include "acnet/netmetrics.hpp"

using namespace acnet;
using namespace acnet::netmetrics;
using simgraph::SimilarityGraph;

TEST_CASE("strength") {
  SimilarityGraph star(2001, {"c", "x", "y", "z", "iso"});
  for (std::size_t leaf = 1; leaf <= 3; ++leaf) star.add_edge({0, leaf, 0, 0.5, true});
  CHECK(node_strength(star, "c") == 1.5);
  CHECK(node_strength(star, "iso") == 0.0);
  CHECK(node_strength(star, "x") == 0.5);
  star.remove_edge(2, 0);
  CHECK(node_strength(star, "c") == 1.0);
  try {
    node_strength(star, "nope");
    FAIL("expected lookup error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Lookup);
  }
}

TEST_CASE("clustering coefficient") {
  SimilarityGraph tri(2001, {"a", "b", "c"});
  tri.add_edge({0, 1, 0, 0.3, true});
  tri.add_edge({1, 2, 0, 0.9, true});
  tri.add_edge({0, 2, 0, 0.5, true});
  CHECK(clustering_coefficient(tri, "a") == 1.0);

  SimilarityGraph path(2001, {"a", "b", "c"});
  path.add_edge({0, 1, 0, 1, true});
  path.add_edge({1, 2, 0, 1, true});
  CHECK(clustering_coefficient(path, "b") == 0.0);
  CHECK(clustering_coefficient(path, "a") == 0.0);

  SimilarityGraph k4(2001, {"h", "b", "c", "d"});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) k4.add_edge({i, j, 0, 0.7, true});
  CHECK(clustering_coefficient(k4, "h") == 1.0);
  k4.remove_edge(1, 2);
  CHECK(clustering_coefficient(k4, "h") == doctest::Approx(2.0 / 3.0));

  SUBCASE("weights do not matter") {
    SimilarityGraph reweighted(2001, {"h", "b", "c", "d"});
    for (const auto& e : k4.edges()) reweighted.add_edge({e.u, e.v, 0, e.weight * 0.1, true});
    const auto a = node_metrics(k4);
    const auto b = node_metrics(reweighted);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].clustering == b[i].clustering);
  }
}

TEST_CASE("pearson with t test") {
  SUBCASE("perfect linear relations") {
    std::vector<double> x, y, z;
    for (int i = 1; i <= 10; ++i) {
      x.push_back(i);
      y.push_back(2.0 * i + 3.0);
      z.push_back(-i);
    }
    const auto p = pearson_with_test(x, y);
    CHECK(p.r == 1.0);
    CHECK(p.p_value == 0.0);
    CHECK(p.significant);
    CHECK(pearson_with_test(x, z).r == -1.0);
  }
  SUBCASE("hand-computed five-point fixture") {
    // Sxy = 8.7, Sxx = 10, Syy = 9  =>  r = 8.7 / sqrt(90)
    const std::vector<double> x{1, 2, 3, 4, 5}, y{2.5, 3.1, 4.9, 4.2, 6.3};
    const auto p = pearson_with_test(x, y);
    CHECK(std::abs(p.r - 0.91706052144883000628) <= 1e-12);
    // scipy.stats.t.sf(3.98345635451198, 3) * 2
    CHECK(p.p_value == doctest::Approx(0.02831377061328976).epsilon(1e-9));
    CHECK(p.n == 5);
    CHECK(p.significant);
  }
  SUBCASE("p-values against scipy") {
    // Series with prescribed r built from two orthonormal centered vectors.
    struct Case { double r; std::size_t n; double p; };
    for (const auto& c : {Case{0.3, 50, 0.03428618003292999}, Case{0.5, 10, 0.14111328124999997},
                          Case{-0.2, 30, 0.2893035287254401}}) {
      std::vector<double> e1(c.n), e2(c.n);
      for (std::size_t i = 0; i < c.n; ++i) {
        e1[i] = std::cos(2 * M_PI * i / c.n);
        e2[i] = std::sin(2 * M_PI * i / c.n);
      }
      std::vector<double> y(c.n);
      for (std::size_t i = 0; i < c.n; ++i) y[i] = c.r * e1[i] + std::sqrt(1 - c.r * c.r) * e2[i];
      const auto p = pearson_with_test(e1, y);
      CHECK(p.r == doctest::Approx(c.r).epsilon(1e-12));
      CHECK(p.p_value == doctest::Approx(c.p).epsilon(1e-8));
    }
  }
  SUBCASE("affine invariance and sign flip") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::vector<double> x(30), y(30), x2(30), x3(30);
    for (std::size_t i = 0; i < 30; ++i) {
      x[i] = g(rng);
      y[i] = 0.5 * x[i] + g(rng);
      x2[i] = 3.5 * x[i] - 7;
      x3[i] = -2 * x[i] + 1;
    }
    const double r = pearson_with_test(x, y).r;
    CHECK(pearson_with_test(x2, y).r == doctest::Approx(r).epsilon(1e-12));
    CHECK(pearson_with_test(x3, y).r == doctest::Approx(-r).epsilon(1e-12));
  }
  SUBCASE("errors") {
    const std::vector<double> a{1, 2}, b{3, 4};
    try {
      pearson_with_test(a, b);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InsufficientSample);
    }
    const std::vector<double> c{1, 1, 1}, d{1, 2, 3};
    try {
      pearson_with_test(c, d);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UndefinedCorrelation);
    }
  }
}

TEST_CASE("economic indicators and yearly series") {
  std::vector<ingest::BankPanel> panels;
  const double lev[] = {0.9, 0.8, 0.6, 0.5, 0.3};
  for (int b = 0; b < 5; ++b) {
    ingest::BankPanel p;
    p.bank_id = "B" + std::to_string(b);
    auto& v = p.years[2004].values;
    v["BS_TOT_ASSET"] = 100.0 * (b + 1);
    v["TOT_DEBT"] = lev[b] * 100.0 * (b + 1);
    if (b != 4) v["NET_INCOME"] = 1.0 + b * b;
    panels.push_back(p);
  }
  const auto ind = economic_indicators(panels, 2004, IndicatorCodes{});
  REQUIRE(ind.size() == 5);
  CHECK(ind[0].size == 100.0);
  CHECK(*ind[2].leverage == doctest::Approx(0.6));
  CHECK_FALSE(ind[4].roa.has_value());

  // strength grows as leverage falls: a star whose hub is the least levered bank
  SimilarityGraph g(2004, {"B0", "B1", "B2", "B3", "B4"});
  g.add_edge({4, 3, 0, 0.9, true});
  g.add_edge({4, 2, 0, 0.8, true});
  g.add_edge({4, 1, 0, 0.7, true});
  g.add_edge({4, 0, 0, 0.1, true});
  g.add_edge({3, 2, 0, 0.6, true});
  std::map<int, SimilarityGraph> graphs{{2004, g}, {2005, SimilarityGraph(2005, {"B0"})}};
  std::map<int, std::vector<EconIndicators>> inds{{2004, ind}};
  const auto series = yearly_correlation_series(graphs, inds, default_pairs(), 0.05);
  REQUIRE(series.size() == 6);
  REQUIRE(series[0].point);
  CHECK(series[0].pair.metric == "strength");
  CHECK(series[0].point->r < 0.0);
  // (clustering, roa) drops the bank without net income pairwise
  REQUIRE(series[2].point);
  CHECK(series[2].point->n == 4);
  // the single-bank year is skipped with a reason
  CHECK_FALSE(series[3].point);
  CHECK(series[3].skip_reason == "insufficient-sample");

  SUBCASE("hand-computed single-year value") {
    // strengths: B0 .1, B1 .7, B2 .8+.6, B3 .9+.6, B4 .9+.8+.7+.1
    const std::vector<double> s{0.1, 0.7, 1.4, 1.5, 2.5};
    const std::vector<double> l{0.9, 0.8, 0.6, 0.5, 0.3};
    double ms = 0, ml = 0;
    for (int i = 0; i < 5; ++i) {
      ms += s[i] / 5;
      ml += l[i] / 5;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < 5; ++i) {
      sxy += (s[i] - ms) * (l[i] - ml);
      sxx += (s[i] - ms) * (s[i] - ms);
      syy += (l[i] - ml) * (l[i] - ml);
    }
    CHECK(std::abs(series[0].point->r - sxy / std::sqrt(sxx * syy)) <= 1e-12);
  }
  const auto csv = correlations_to_csv(series);
  CHECK(csv.rfind("year,x_name,y_name,r,p_value,n,significant\n", 0) == 0);
}
