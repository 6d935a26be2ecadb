#include "acnet/netmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <boost/math/distributions/students_t.hpp>

namespace acnet::netmetrics {

double node_strength(const simgraph::SimilarityGraph& graph, const std::string& bank_id) {
  const std::size_t i = graph.index_of(bank_id);
  double s = 0.0;
  for (const auto& e : graph.edges()) {
    if (e.u == i || e.v == i) s += e.weight;
  }
  return s;
}

namespace {

std::vector<std::set<std::size_t>> skeleton(const simgraph::SimilarityGraph& graph) {
  std::vector<std::set<std::size_t>> nbrs(graph.node_count());
  for (const auto& e : graph.edges()) {
    nbrs[e.u].insert(e.v);
    nbrs[e.v].insert(e.u);
  }
  return nbrs;
}

double local_clustering(const std::vector<std::set<std::size_t>>& nbrs, std::size_t i) {
  const auto& ni = nbrs[i];
  const double k = static_cast<double>(ni.size());
  if (ni.size() < 2) return 0.0;
  std::size_t triangles = 0;
  for (auto a = ni.begin(); a != ni.end(); ++a) {
    for (auto b = std::next(a); b != ni.end(); ++b) {
      if (nbrs[*a].count(*b)) ++triangles;
    }
  }
  return 2.0 * static_cast<double>(triangles) / (k * (k - 1.0));
}

}  // namespace

double clustering_coefficient(const simgraph::SimilarityGraph& graph, const std::string& bank_id) {
  const std::size_t i = graph.index_of(bank_id);
  return local_clustering(skeleton(graph), i);
}

std::vector<NodeMetrics> node_metrics(const simgraph::SimilarityGraph& graph) {
  const auto nbrs = skeleton(graph);
  std::vector<double> strength(graph.node_count(), 0.0);
  for (const auto& e : graph.edges()) {
    strength[e.u] += e.weight;
    strength[e.v] += e.weight;
  }
  std::vector<NodeMetrics> out;
  out.reserve(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out.push_back(NodeMetrics{graph.nodes()[i], strength[i], local_clustering(nbrs, i)});
  }
  return out;
}

std::vector<EconIndicators> economic_indicators(const std::vector<ingest::BankPanel>& panels,
                                                int year, const IndicatorCodes& codes) {
  std::vector<EconIndicators> out;
  for (const auto& p : panels) {
    auto st = p.years.find(year);
    if (st == p.years.end()) continue;
    const auto& v = st->second.values;
    auto ta = v.find(codes.total_assets);
    if (ta == v.end() || !(ta->second > 0.0)) continue;
    EconIndicators ind;
    ind.bank_id = p.bank_id;
    ind.size = ta->second;
    if (auto ni = v.find(codes.net_income); ni != v.end()) ind.roa = ni->second / ta->second;
    if (auto td = v.find(codes.total_debts); td != v.end()) ind.leverage = td->second / ta->second;
    out.push_back(std::move(ind));
  }
  return out;
}

CorrelationPoint pearson_with_test(std::span<const double> x, std::span<const double> y,
                                   double alpha) {
  if (x.size() != y.size()) throw Error(ErrorKind::Domain, "series differ in length");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Config, "alpha must lie in (0,1)");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::InsufficientSample, "Pearson test needs at least 3 pairs");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::UndefinedCorrelation, "Pearson correlation of a constant series");
  }

  CorrelationPoint pt;
  pt.n = n;
  pt.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  const double one_minus = 1.0 - pt.r * pt.r;
  if (one_minus <= 0.0) {
    pt.p_value = 0.0;
  } else if (df == 0.0) {
    pt.p_value = 1.0;
  } else {
    const double t = std::abs(pt.r) * std::sqrt(df / one_minus);
    boost::math::students_t dist(df);
    pt.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
  }
  pt.significant = pt.p_value < alpha;
  return pt;
}

std::vector<MeasurePair> default_pairs() {
  return {{"strength", "leverage"}, {"strength", "size"}, {"clustering", "roa"}};
}

namespace {

std::optional<double> metric_value(const NodeMetrics& m, const std::string& name) {
  if (name == "strength") return m.strength;
  if (name == "clustering") return m.clustering;
  throw Error(ErrorKind::Config, "unknown network metric '" + name + "'");
}

std::optional<double> indicator_value(const EconIndicators& ind, const std::string& name) {
  if (name == "roa") return ind.roa;
  if (name == "leverage") return ind.leverage;
  if (name == "size") return ind.size;
  throw Error(ErrorKind::Config, "unknown economic indicator '" + name + "'");
}

}  // namespace

std::vector<SeriesEntry> yearly_correlation_series(
    const std::map<int, simgraph::SimilarityGraph>& graphs,
    const std::map<int, std::vector<EconIndicators>>& indicators,
    const std::vector<MeasurePair>& pairs, double alpha) {
  std::vector<SeriesEntry> out;
  for (const auto& [year, graph] : graphs) {
    const auto metrics = node_metrics(graph);
    std::map<std::string, const EconIndicators*> by_bank;
    if (auto it = indicators.find(year); it != indicators.end()) {
      for (const auto& ind : it->second) by_bank[ind.bank_id] = &ind;
    }
    for (const auto& pair : pairs) {
      SeriesEntry entry;
      entry.year = year;
      entry.pair = pair;
      std::vector<double> xs, ys;
      for (const auto& m : metrics) {
        auto it = by_bank.find(m.bank_id);
        if (it == by_bank.end()) continue;
        const auto xv = metric_value(m, pair.metric);
        const auto yv = indicator_value(*it->second, pair.indicator);
        if (!xv || !yv || !std::isfinite(*xv) || !std::isfinite(*yv)) continue;
        xs.push_back(*xv);
        ys.push_back(*yv);
      }
      try {
        auto pt = pearson_with_test(xs, ys, alpha);
        pt.year = year;
        pt.x_name = pair.metric;
        pt.y_name = pair.indicator;
        entry.point = pt;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        entry.skip_reason = std::string(to_string(e.kind()));
      }
      out.push_back(std::move(entry));
    }
  }
  return out;
}

std::string correlations_to_csv(const std::vector<SeriesEntry>& series) {
  std::string out = "year,x_name,y_name,r,p_value,n,significant\n";
  for (const auto& e : series) {
    if (!e.point) continue;
    const auto& p = *e.point;
    out += textio::join_record({std::to_string(p.year), p.x_name, p.y_name,
                                textio::format_double(p.r), textio::format_double(p.p_value),
                                std::to_string(p.n), p.significant ? "1" : "0"},
                               ',');
    out.push_back('\n');
  }
  return out;
}

}  // namespace acnet::netmetrics
