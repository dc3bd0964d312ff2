#pragma once

#include <utility>
#include <vector>

#include "trustsim/core.hpp"
#include "trustsim/rng.hpp"

namespace trustsim {

/// Baseline weight added to every candidate in partner selection so that
/// agents without friendship ties still get sampled occasionally.
inline constexpr double kSelectionBaseline = 0.05;

/// Influence-network links below this averaged trust weight are dropped.
inline constexpr double kInfluencePruneThreshold = 0.05;

/// Undirected friendship graph. Edges are stored normalized (a < b) and
/// sorted lexicographically.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  bool has_edge(int a, int b) const;
  std::vector<std::vector<int>> adjacency() const;
  bool connected() const;
};

/// Builds the friendship graph for a topology. Complete and tree graphs are
/// deterministic; preferential attachment consumes draws from `rng` (one
/// uniform per attachment slot, rejection on duplicates).
Graph generate_topology(const Topology& topology, int n, RandomStream& rng);

/// Samples up to k distinct partners for `agent` (never itself), weighted by
/// (kSelectionBaseline + friendship(agent, other)) * propensity[other].
/// `friend_weight[j]` must be 1.0 for friends and 0.0 otherwise; propensities
/// come from memory-based learning. Sampling is without replacement via
/// cumulative-weight inversion, consuming one uniform per selected partner.
std::vector<int> select_partners(int agent, int k, const Graph& graph,
                                 const std::vector<double>& propensity,
                                 RandomStream& rng);

/// Column means of the trust matrix excluding the diagonal:
/// rep_j = mean over i != j of trust(i, j). Degenerate n = 1 gives {1.0}.
std::vector<double> compute_reputation(const TrustMatrix& trust);

struct WeightedLink {
  int source = 0;  // source < target
  int target = 0;
  double weight = 0.0;
};

struct InfluenceNetwork {
  int n = 0;
  std::vector<WeightedLink> links;  // sorted by (source, target)
};

/// Symmetrizes the trust matrix into an undirected influence network:
/// weight(i, j) = (trust(i, j) + trust(j, i)) / 2, pruning links below
/// kInfluencePruneThreshold.
InfluenceNetwork influence_network(const TrustMatrix& trust);

}  // namespace trustsim
