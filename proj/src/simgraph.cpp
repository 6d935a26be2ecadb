#include "acnet/simgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace acnet::simgraph {

SimilarityGraph::SimilarityGraph(int year, std::vector<std::string> nodes)
    : year_(year), nodes_(std::move(nodes)) {}

std::size_t SimilarityGraph::index_of(const std::string& bank_id) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), bank_id);
  if (it == nodes_.end()) throw Error(ErrorKind::Lookup, "unknown node '" + bank_id + "'");
  return static_cast<std::size_t>(it - nodes_.begin());
}

void SimilarityGraph::add_edge(Edge edge) {
  if (edge.u == edge.v) throw Error(ErrorKind::Invariant, "self-loop on node " + nodes_.at(edge.u));
  if (edge.u >= nodes_.size() || edge.v >= nodes_.size()) {
    throw Error(ErrorKind::Lookup, "edge endpoint out of range");
  }
  if (edge.u > edge.v) std::swap(edge.u, edge.v);
  edges_.push_back(edge);
}

void SimilarityGraph::remove_edge(std::size_t u, std::size_t v) {
  if (u > v) std::swap(u, v);
  std::erase_if(edges_, [&](const Edge& e) { return e.u == u && e.v == v; });
}

std::vector<std::vector<Neighbor>> SimilarityGraph::adjacency() const {
  std::vector<std::vector<Neighbor>> adj(nodes_.size());
  for (const auto& e : edges_) {
    adj[e.u].push_back({e.v, e.weight});
    adj[e.v].push_back({e.u, e.weight});
  }
  return adj;
}

double SimilarityGraph::total_weight() const {
  double w = 0.0;
  for (const auto& e : edges_) w += e.weight;
  return w;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(ErrorKind::Domain, "feature rows differ in length");
  const double nu = std::sqrt(dot(u, u));
  const double nv = std::sqrt(dot(v, v));
  if (nu == 0.0 || nv == 0.0) {
    throw Error(ErrorKind::UndefinedSimilarity, "cosine similarity of a zero-norm row");
  }
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

double metric_weight(double cosine) {
  if (!(std::abs(cosine) <= 1.0 + 1e-9)) {
    throw Error(ErrorKind::Domain, "cosine " + textio::format_double(cosine) + " outside [-1,1]");
  }
  const double c2 = std::min(cosine * cosine, 1.0);
  return c2 / (1.0 + std::sqrt(1.0 - c2));
}

void SignificanceConfig::validate() const {
  if (samples < 100) throw Error(ErrorKind::Config, "Monte Carlo samples must be at least 100");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Config, "alpha must lie in (0,1)");
}

bool significance_test(std::span<const double> u, std::span<const double> v,
                       const SignificanceConfig& config, std::uint64_t rng_seed) {
  config.validate();
  (void)cosine_similarity(u, v);  // rejects zero-norm rows

  // |v| is permutation invariant, so comparing |u . pi(v)| is equivalent.
  const double observed = std::abs(dot(u, v));
  std::vector<double> perm(v.begin(), v.end());
  std::vector<double> null(static_cast<std::size_t>(config.samples));
  std::mt19937_64 rng(rng_seed);
  for (auto& x : null) {
    std::shuffle(perm.begin(), perm.end(), rng);
    x = std::abs(dot(u, perm));
  }
  auto rank = static_cast<std::size_t>(
      std::ceil((1.0 - config.alpha) * static_cast<double>(config.samples)));
  rank = std::clamp<std::size_t>(rank, 1, null.size());
  std::nth_element(null.begin(), null.begin() + static_cast<std::ptrdiff_t>(rank - 1), null.end());
  return observed > null[rank - 1];
}

std::uint64_t pair_seed(std::uint64_t root, const std::string& a, const std::string& b) {
  const auto& lo = std::min(a, b);
  const auto& hi = std::max(a, b);
  std::uint64_t h = fnv1a(lo);
  h = fnv1a(std::string_view("\x1f", 1), h);
  h = fnv1a(hi, h);
  return splitmix64(root ^ splitmix64(h));
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view label, long long a, long long b) {
  std::uint64_t h = splitmix64(root ^ fnv1a(label));
  h = splitmix64(h ^ static_cast<std::uint64_t>(a));
  return splitmix64(h ^ static_cast<std::uint64_t>(b));
}

std::vector<Edge> score_pairs(const features::FeatureMatrix& matrix,
                              const SignificanceConfig& config, std::uint64_t rng_seed) {
  config.validate();
  const auto& ids = matrix.bank_ids();
  std::vector<Edge> pairs;
  const std::size_t n = matrix.rows();
  pairs.reserve(n > 1 ? n * (n - 1) / 2 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Edge e;
      e.u = i;
      e.v = j;
      e.cosine = cosine_similarity(matrix.row(i), matrix.row(j));
      e.weight = metric_weight(e.cosine);
      e.significant =
          significance_test(matrix.row(i), matrix.row(j), config, pair_seed(rng_seed, ids[i], ids[j]));
      pairs.push_back(e);
    }
  }
  return pairs;
}

SimilarityGraph graph_from_pairs(int year, std::vector<std::string> nodes,
                                 const std::vector<Edge>& pairs) {
  SimilarityGraph g(year, std::move(nodes));
  for (const auto& e : pairs) {
    if (e.significant) g.add_edge(e);
  }
  return g;
}

SimilarityGraph build_graph(const features::FeatureMatrix& matrix,
                            const SignificanceConfig& config, std::uint64_t rng_seed) {
  return graph_from_pairs(matrix.year(), matrix.bank_ids(), score_pairs(matrix, config, rng_seed));
}

double largest_component_fraction(const SimilarityGraph& graph) {
  const std::size_t n = graph.node_count();
  if (n == 0) return 0.0;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : graph.edges()) parent[find(e.u)] = find(e.v);
  std::vector<std::size_t> size(n, 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, ++size[find(i)]);
  return static_cast<double>(best) / static_cast<double>(n);
}

SimilarityGraph prune(const SimilarityGraph& graph, double threshold, Warnings* warnings) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::Config, "prune threshold must lie in [0,1]");
  }
  SimilarityGraph out(graph.year(), graph.nodes());
  for (const auto& e : graph.edges()) {
    if (e.weight >= threshold) out.add_edge(e);
  }
  if (warnings && out.node_count() > 0) {
    const double frac = largest_component_fraction(out);
    if (frac < 0.95) {
      warnings->add("year " + std::to_string(graph.year()) + " threshold " +
                    textio::format_double(threshold) + ": largest component covers " +
                    textio::format_double(frac) + " of nodes (fragmented)");
    }
  }
  return out;
}

std::string pairs_to_tsv(const std::vector<std::string>& nodes, const std::vector<Edge>& pairs) {
  std::string out = "src_bank\tdst_bank\tcosine\tweight\tsignificant\n";
  for (const auto& e : pairs) {
    out += textio::join_record({nodes.at(e.u), nodes.at(e.v), textio::format_double(e.cosine),
                                textio::format_double(e.weight), e.significant ? "1" : "0"},
                               '\t');
    out.push_back('\n');
  }
  return out;
}

SimilarityGraph graph_from_tsv(int year, std::vector<std::string> nodes, const textio::Table& table) {
  const std::size_t c_src = table.column("src_bank");
  const std::size_t c_dst = table.column("dst_bank");
  const std::size_t c_cos = table.column("cosine");
  const std::size_t c_w = table.column("weight");
  const std::size_t c_sig = table.column("significant");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  SimilarityGraph g(year, std::move(nodes));
  for (const auto& row : table.rows) {
    auto bad = [&](const std::string& what) {
      throw Error(ErrorKind::Parse, "edge list line " + std::to_string(row.line) + ": " + what);
    };
    if (row.fields.size() != table.header.size()) bad("wrong field count");
    auto su = index.find(row.fields[c_src]);
    auto sv = index.find(row.fields[c_dst]);
    if (su == index.end() || sv == index.end()) bad("endpoint not in node list");
    Edge e;
    e.u = su->second;
    e.v = sv->second;
    if (!textio::parse_double(row.fields[c_cos], e.cosine)) bad("bad cosine");
    if (!textio::parse_double(row.fields[c_w], e.weight)) bad("bad weight");
    const std::string& sig = row.fields[c_sig];
    if (sig != "0" && sig != "1") bad("significant must be 0 or 1");
    e.significant = sig == "1";
    if (e.significant) g.add_edge(e);
  }
  return g;
}

}  // namespace acnet::simgraph
