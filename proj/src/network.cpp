#include "trustsim/network.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace trustsim {

namespace {

std::pair<int, int> norm_edge(int a, int b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

Graph complete_graph(int n) {
  Graph g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  }
  return g;
}

// Barabasi-Albert style growth. Nodes 0..m form a seed clique; each later
// node attaches to m distinct existing nodes chosen with probability
// proportional to current degree (rejection sampling on duplicates).
Graph preferential_attachment_graph(int n, int m, RandomStream& rng) {
  if (m < 1) throw std::invalid_argument("preferential attachment requires m >= 1");
  if (n < m + 1) throw std::invalid_argument("preferential attachment requires n >= m + 1");
  Graph g;
  g.n = n;
  std::vector<long> degree(static_cast<std::size_t>(n), 0);
  long degree_total = 0;
  auto add_edge = [&](int a, int b) {
    g.edges.push_back(norm_edge(a, b));
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
    degree_total += 2;
  };
  for (int i = 0; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) add_edge(i, j);
  }
  std::vector<int> chosen;
  for (int v = m + 1; v < n; ++v) {
    chosen.clear();
    while (static_cast<int>(chosen.size()) < m) {
      // Inverse-CDF draw over current degrees (existing nodes 0..v-1 all
      // have degree >= m >= 1, so the walk always terminates).
      const double r = rng.uniform01() * static_cast<double>(degree_total);
      double acc = 0.0;
      int pick = v - 1;
      for (int u = 0; u < v; ++u) {
        acc += static_cast<double>(degree[static_cast<std::size_t>(u)]);
        if (r < acc) {
          pick = u;
          break;
        }
      }
      if (std::find(chosen.begin(), chosen.end(), pick) != chosen.end()) continue;
      chosen.push_back(pick);
    }
    for (int u : chosen) add_edge(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

// b-ary tree over heap numbering: node i's children are b*i+1 .. b*i+b.
Graph tree_graph(int n, int branching) {
  if (branching < 1) throw std::invalid_argument("tree requires branching >= 1");
  Graph g;
  g.n = n;
  for (int i = 1; i < n; ++i) g.edges.emplace_back((i - 1) / branching, i);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace

bool Graph::has_edge(int a, int b) const {
  if (a == b) return false;
  return std::binary_search(edges.begin(), edges.end(), norm_edge(a, b));
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

bool Graph::connected() const {
  if (n <= 1) return true;
  const auto adj = adjacency();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

Graph generate_topology(const Topology& topology, int n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("topology requires n >= 1");
  if (std::holds_alternative<CompleteTopology>(topology)) return complete_graph(n);
  if (const auto* pa = std::get_if<PreferentialAttachment>(&topology)) {
    return preferential_attachment_graph(n, pa->m, rng);
  }
  const auto& tree = std::get<TreeTopology>(topology);
  return tree_graph(n, tree.branching);
}

std::vector<int> select_partners(int agent, int k, const Graph& graph,
                                 const std::vector<double>& propensity,
                                 RandomStream& rng) {
  assert(static_cast<int>(propensity.size()) == graph.n);
  std::vector<int> candidates;
  std::vector<double> weights;
  candidates.reserve(static_cast<std::size_t>(graph.n));
  for (int j = 0; j < graph.n; ++j) {
    if (j == agent) continue;
    const double friend_w = graph.has_edge(agent, j) ? 1.0 : 0.0;
    const double w = (kSelectionBaseline + friend_w) * propensity[static_cast<std::size_t>(j)];
    if (w > 0.0) {
      candidates.push_back(j);
      weights.push_back(w);
    }
  }
  std::vector<int> picked;
  const int want = std::min<int>(k, static_cast<int>(candidates.size()));
  for (int round = 0; round < want; ++round) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double r = rng.uniform01() * total;
    double acc = 0.0;
    std::size_t idx = candidates.size() - 1;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      acc += weights[c];
      if (r < acc) {
        idx = c;
        break;
      }
    }
    picked.push_back(candidates[idx]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(idx));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return picked;
}

std::vector<double> compute_reputation(const TrustMatrix& trust) {
  const auto n = static_cast<int>(trust.rows());
  std::vector<double> rep(static_cast<std::size_t>(n), 1.0);
  if (n <= 1) return rep;
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i != j) sum += trust(i, j);
    }
    rep[static_cast<std::size_t>(j)] = sum / static_cast<double>(n - 1);
  }
  return rep;
}

InfluenceNetwork influence_network(const TrustMatrix& trust) {
  InfluenceNetwork net;
  net.n = static_cast<int>(trust.rows());
  for (int i = 0; i < net.n; ++i) {
    for (int j = i + 1; j < net.n; ++j) {
      const double w = 0.5 * (trust(i, j) + trust(j, i));
      if (w >= kInfluencePruneThreshold) net.links.push_back({i, j, w});
    }
  }
  return net;
}

}  // namespace trustsim
