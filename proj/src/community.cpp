#include "acnet/community.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

namespace acnet::community {

int Partition::community_count() const {
  std::set<int> labels(assignment.begin(), assignment.end());
  return static_cast<int>(labels.size());
}

double eval_modularity(const simgraph::SimilarityGraph& graph, std::span<const int> assignment) {
  if (assignment.size() != graph.node_count()) {
    throw Error(ErrorKind::Invariant, "assignment does not cover every node");
  }
  double two_w = 0.0;
  for (const auto& e : graph.edges()) two_w += 2.0 * e.weight;
  if (!(two_w > 0.0)) throw Error(ErrorKind::UndefinedModularity, "graph has zero total weight");

  std::vector<double> strength(graph.node_count(), 0.0);
  std::map<int, double> internal;  // ordered-pair weight inside each community
  std::map<int, double> total;     // strength sum of each community
  for (const auto& e : graph.edges()) {
    strength[e.u] += e.weight;
    strength[e.v] += e.weight;
    if (assignment[e.u] == assignment[e.v]) internal[assignment[e.u]] += 2.0 * e.weight;
  }
  for (std::size_t i = 0; i < strength.size(); ++i) total[assignment[i]] += strength[i];

  double q = 0.0;
  for (const auto& [label, tot] : total) {
    auto it = internal.find(label);
    const double in = it == internal.end() ? 0.0 : it->second;
    const double share = tot / two_w;
    q += in / two_w - share * share;
  }
  return q;
}

std::vector<int> canonical_labels(std::span<const int> assignment) {
  std::map<int, int> remap;
  std::vector<int> out;
  out.reserve(assignment.size());
  for (int c : assignment) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

namespace {

// Aggregated graph of one Louvain level. `loop[i]` is node i's own
// ordered-pair weight (A_ii), `degree[i]` includes it.
struct LevelGraph {
  std::vector<std::vector<simgraph::Neighbor>> adj;
  std::vector<double> loop;
  std::vector<double> degree;
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }
};

LevelGraph from_similarity(const simgraph::SimilarityGraph& graph) {
  LevelGraph g;
  g.adj = graph.adjacency();
  g.loop.assign(g.adj.size(), 0.0);
  g.degree.assign(g.adj.size(), 0.0);
  for (std::size_t i = 0; i < g.adj.size(); ++i) {
    for (const auto& nb : g.adj[i]) g.degree[i] += nb.weight;
    g.two_m += g.degree[i];
  }
  return g;
}

// Local moving phase. Returns true when any node changed community.
bool move_nodes(const LevelGraph& g, std::vector<int>& community, std::mt19937_64& rng) {
  const std::size_t n = g.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[community[i]] += g.degree[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);  // weight from the visited node to each community
  std::vector<int> touched;
  bool moved_any = false;

  for (int pass = 0; pass < 10000; ++pass) {
    double pass_gain = 0.0;
    for (std::size_t i : order) {
      const int old = community[i];
      const double k = g.degree[i];
      touched.clear();
      for (const auto& nb : g.adj[i]) {
        const int c = community[nb.node];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += nb.weight;
      }
      tot[old] -= k;

      auto gain = [&](int c) { return link[c] - tot[c] * k / g.two_m; };
      int best = old;
      double best_gain = gain(old);
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        if (c == old) continue;
        const double gc = gain(c);
        if (gc > best_gain) {
          best = c;
          best_gain = gc;
        }
      }
      const double improvement = best_gain - gain(old);
      tot[best] += k;
      if (best != old) {
        community[i] = best;
        moved_any = true;
        pass_gain += 2.0 * improvement / g.two_m;
      }
      for (int c : touched) link[c] = 0.0;
      link[old] = 0.0;
    }
    if (pass_gain < 1e-10) break;
  }
  return moved_any;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& community, int count) {
  LevelGraph out;
  const auto n = static_cast<std::size_t>(count);
  out.adj.resize(n);
  out.loop.assign(n, 0.0);
  out.degree.assign(n, 0.0);
  std::vector<std::map<std::size_t, double>> links(n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ci = static_cast<std::size_t>(community[i]);
    out.loop[ci] += g.loop[i];
    out.degree[ci] += g.degree[i];
    for (const auto& nb : g.adj[i]) {
      const auto cj = static_cast<std::size_t>(community[nb.node]);
      if (ci == cj) {
        out.loop[ci] += nb.weight;
      } else {
        links[ci][cj] += nb.weight;
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& [d, w] : links[c]) out.adj[c].push_back({d, w});
  }
  out.two_m = g.two_m;
  return out;
}

}  // namespace

Partition louvain(const simgraph::SimilarityGraph& graph, std::uint64_t rng_seed) {
  LevelGraph level = from_similarity(graph);
  if (!(level.two_m > 0.0)) throw Error(ErrorKind::UndefinedModularity, "graph has zero total weight");

  std::mt19937_64 rng(rng_seed);
  std::vector<int> membership(graph.node_count());
  std::iota(membership.begin(), membership.end(), 0);

  while (true) {
    std::vector<int> community(level.size());
    std::iota(community.begin(), community.end(), 0);
    if (!move_nodes(level, community, rng)) break;
    const auto dense = canonical_labels(community);
    const int count = *std::max_element(dense.begin(), dense.end()) + 1;
    for (auto& m : membership) m = dense[static_cast<std::size_t>(m)];
    if (static_cast<std::size_t>(count) == level.size()) break;
    level = aggregate(level, dense, count);
  }

  Partition p;
  p.assignment = canonical_labels(membership);
  p.modularity = eval_modularity(graph, p.assignment);
  return p;
}

std::vector<SweepPoint> threshold_sweep(const simgraph::SimilarityGraph& graph,
                                        const std::vector<double>& thresholds,
                                        std::uint64_t rng_seed, Warnings* warnings) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorKind::Config, "sweep thresholds must be ascending");
  }
  std::vector<SweepPoint> out;
  for (double t : thresholds) {
    SweepPoint point;
    point.threshold = t;
    const auto pruned = simgraph::prune(graph, t, warnings);
    point.largest_component_fraction = simgraph::largest_component_fraction(pruned);
    point.fragmented = point.largest_component_fraction < 0.95;
    if (pruned.total_weight() > 0.0) {
      point.partition = louvain(pruned, rng_seed);
      point.partition->threshold_used = t;
    } else if (warnings) {
      warnings->add("year " + std::to_string(graph.year()) + " threshold " +
                    textio::format_double(t) + ": no links survive pruning; no partition");
    }
    out.push_back(std::move(point));
  }
  return out;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::Domain, "labelings differ in length");
  const auto n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double index = 0, sa = 0, sb = 0;
  for (const auto& [k, v] : joint) index += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(n);
  const double max_index = (sa + sb) / 2;
  if (max_index == expected) return index == expected ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

std::vector<int> align_labels(const std::map<std::string, int>& previous,
                              const std::vector<std::string>& nodes,
                              std::span<const int> assignment, int& next_label) {
  if (nodes.size() != assignment.size()) throw Error(ErrorKind::Invariant, "label/node size mismatch");
  std::map<std::pair<int, int>, int> overlap;  // (current, previous) -> shared banks
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto it = previous.find(nodes[i]);
    if (it != previous.end()) ++overlap[{assignment[i], it->second}];
  }
  std::vector<std::tuple<int, int, int>> ranked;  // (-overlap, current, previous)
  for (const auto& [key, count] : overlap) ranked.emplace_back(-count, key.first, key.second);
  std::sort(ranked.begin(), ranked.end());

  std::map<int, int> mapping;
  std::set<int> used;
  for (const auto& [neg, cur, prev] : ranked) {
    if (mapping.count(cur) || used.count(prev)) continue;
    mapping[cur] = prev;
    used.insert(prev);
  }
  std::vector<int> out;
  out.reserve(assignment.size());
  for (int c : assignment) {
    auto it = mapping.find(c);
    if (it == mapping.end()) it = mapping.emplace(c, next_label++).first;
    out.push_back(it->second);
  }
  return out;
}

}  // namespace acnet::community
