#pragma once

// Cosine-similarity networks: pairwise similarity, the metric weight
// transform, the Monte Carlo permutation filter on links, and pruning.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "acnet/error.hpp"
#include "acnet/features.hpp"
#include "acnet/textio.hpp"

namespace acnet::simgraph {

/// Undirected link between node indices `u < v`.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double cosine = 0.0;
  double weight = 0.0;
  bool significant = false;
};

struct Neighbor {
  std::size_t node;
  double weight;
};

/// Weighted undirected graph over bank ids. Each link is stored once with
/// u < v, so attributes are symmetric by construction; self-loops are
/// rejected.
class SimilarityGraph {
 public:
  SimilarityGraph() = default;
  SimilarityGraph(int year, std::vector<std::string> nodes);

  int year() const { return year_; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Throws ErrorKind::Lookup for an unknown id.
  std::size_t index_of(const std::string& bank_id) const;

  void add_edge(Edge edge);
  void remove_edge(std::size_t u, std::size_t v);

  std::vector<std::vector<Neighbor>> adjacency() const;
  double total_weight() const;

 private:
  int year_ = 0;
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
};

/// (u.v) / (|u||v|), clamped to [-1,1]. Zero-norm input throws
/// ErrorKind::UndefinedSimilarity.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// 1 - sqrt(1 - c^2), evaluated as c^2 / (1 + sqrt(1 - c^2)) to avoid
/// cancellation near 0. |c| may exceed 1 by at most 1e-9 (clamped);
/// beyond that ErrorKind::Domain is thrown.
double metric_weight(double cosine);

struct SignificanceConfig {
  int samples = 1000;
  double alpha = 0.05;

  void validate() const;
};

/// Permutation test on |cos(u,v)|: the null is |cos(u, pi(v))| for uniform
/// random permutations pi of v's components. The link is significant when
/// the observed value is strictly above the null's (1 - alpha) quantile
/// (order statistic ceil((1 - alpha) * samples)).
bool significance_test(std::span<const double> u, std::span<const double> v,
                       const SignificanceConfig& config, std::uint64_t rng_seed);

/// Stable 64-bit mix of a root seed and a pair of labels; order-insensitive
/// in the labels so (a,b) and (b,a) share a stream.
std::uint64_t pair_seed(std::uint64_t root, const std::string& a, const std::string& b);
std::uint64_t derive_seed(std::uint64_t root, std::string_view label, long long a = 0,
                          long long b = 0);

/// Scores every bank pair of the matrix: cosine, weight and verdict. Each
/// pair's Monte Carlo stream is seeded from the two bank ids, so a verdict
/// does not depend on which other banks are present.
std::vector<Edge> score_pairs(const features::FeatureMatrix& matrix,
                              const SignificanceConfig& config, std::uint64_t rng_seed);

/// Graph keeping only the significant pairs.
SimilarityGraph graph_from_pairs(int year, std::vector<std::string> nodes,
                                 const std::vector<Edge>& pairs);
SimilarityGraph build_graph(const features::FeatureMatrix& matrix,
                            const SignificanceConfig& config, std::uint64_t rng_seed);

double largest_component_fraction(const SimilarityGraph& graph);

/// Keeps links with weight >= threshold. A warning is recorded when the
/// largest connected component covers less than 95% of the nodes.
SimilarityGraph prune(const SimilarityGraph& graph, double threshold, Warnings* warnings = nullptr);

/// Tab-separated src_bank, dst_bank, cosine, weight, significant (0/1).
std::string pairs_to_tsv(const std::vector<std::string>& nodes, const std::vector<Edge>& pairs);

/// Reads an edge list written by pairs_to_tsv back into a significant-link
/// graph over `nodes` (the node list is not recoverable from the edges).
SimilarityGraph graph_from_tsv(int year, std::vector<std::string> nodes, const textio::Table& table);

}  // namespace acnet::simgraph
