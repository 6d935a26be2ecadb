#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acnet/error.hpp"
#include "acnet/simgraph.hpp"

namespace acnet::community {

/// Community label per node index (dense, from 0) and its weighted
/// modularity on the graph it was computed for.
struct Partition {
  std::vector<int> assignment;
  double modularity = 0.0;
  double threshold_used = 0.0;

  int community_count() const;
};

/// Weighted modularity
///   Q = 1/(2W) * sum_ij (w_ij - s_i s_j / (2W)) delta(c_i, c_j)
/// over ordered node pairs, with 2W the ordered-pair weight total (twice the
/// sum of link weights). Throws ErrorKind::UndefinedModularity when the
/// graph carries no weight.
double eval_modularity(const simgraph::SimilarityGraph& graph, std::span<const int> assignment);

/// Relabels to dense integers in order of first appearance.
std::vector<int> canonical_labels(std::span<const int> assignment);

/// Two-phase Louvain optimization. Nodes are visited in an order shuffled
/// once per level from `rng_seed`; a node moves only for a strictly
/// positive gain, ties going to the lowest community label. A level ends
/// when a full pass gains less than 1e-10.
Partition louvain(const simgraph::SimilarityGraph& graph, std::uint64_t rng_seed);

struct SweepPoint {
  double threshold = 0.0;
  std::optional<Partition> partition;  // empty when pruning removed every link
  double largest_component_fraction = 0.0;
  bool fragmented = false;  // largest component below 95% of nodes
};

/// Prunes at each threshold (ascending, within [0,1]) and runs Louvain on
/// the result with the same seed.
std::vector<SweepPoint> threshold_sweep(const simgraph::SimilarityGraph& graph,
                                        const std::vector<double>& thresholds,
                                        std::uint64_t rng_seed, Warnings* warnings = nullptr);

/// Chance-corrected agreement of two labelings of the same nodes.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

/// Carries community identities from one year to the next: each current
/// community takes the label of the previous-year community it overlaps
/// most (greedy by overlap size); unmatched communities receive fresh
/// labels starting at `next_label`, which is advanced.
std::vector<int> align_labels(const std::map<std::string, int>& previous,
                              const std::vector<std::string>& nodes,
                              std::span<const int> assignment, int& next_label);

}  // namespace acnet::community
