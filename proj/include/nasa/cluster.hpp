#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "nasa/common.hpp"
#include "nasa/graph.hpp"

namespace nasa {

// Per-node cluster ids, contiguous from 0, ordered by smallest member node.
using ClusterAssignment = std::vector<int>;

struct DpcConfig {
  int k_density = 10;
  double sigma = 0.1;
  int max_connections = 1;
  double link_threshold = 0.5;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int p) {
    int root = p;
    while (root != parent_[root]) root = parent_[root];
    while (p != root) {
      const int next = parent_[p];
      parent_[p] = root;
      p = next;
    }
    return root;
  }

  void merge(int a, int b) {
    const int ra = find(a);
    const int rb = find(b);
    if (ra == rb) return;
    if (size_[ra] < size_[rb]) {
      parent_[ra] = rb;
      size_[rb] += size_[ra];
    } else {
      parent_[rb] = ra;
      size_[ra] += size_[rb];
    }
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

// ---------------------------------------------------------------------------
// estimate_density: kernel sum over each node's top-k_density strongest
// non-self neighbors, rho_i = sum exp(-(1 - w_ij) / sigma).
// ---------------------------------------------------------------------------
using DensityVector = std::vector<double>;

inline DensityVector estimate_density(const WeightedGraph& g, const DpcConfig& cfg) {
  require(cfg.sigma > 0.0, "estimate_density: sigma must be positive");
  require(cfg.k_density >= 1, "estimate_density: k_density must be >= 1");
  const int n = g.count();
  DensityVector rho(n, 0.0);
  parallel_for(n, [&](int64_t lo, int64_t hi) {
    std::vector<std::pair<double, int>> nbrs;
    for (int64_t i = lo; i < hi; ++i) {
      nbrs.clear();
      for (const auto& e : g.adj[i])
        if (e.to != i) nbrs.emplace_back(e.w, e.to);
      std::sort(nbrs.begin(), nbrs.end(),
                [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
      const int m = std::min<int>(cfg.k_density, static_cast<int>(nbrs.size()));
      double s = 0.0;
      for (int t = 0; t < m; ++t) s += std::exp(-(1.0 - nbrs[t].first) / cfg.sigma);
      rho[i] = s;
    }
  });
  return rho;
}

// ---------------------------------------------------------------------------
// peak_link: connect each node to its higher-density neighbors (density ties
// broken by higher node id) whose weight passes the link threshold, keeping
// at most max_connections per node, strongest first. Density maxima emit no
// edges and become cluster roots.
// ---------------------------------------------------------------------------
struct LinkEdge {
  int from = 0;
  int to = 0;
};

inline std::vector<LinkEdge> peak_link(const WeightedGraph& g, const DensityVector& rho, const DpcConfig& cfg) {
  const int n = g.count();
  require(static_cast<int>(rho.size()) == n, "peak_link: density length mismatch");
  require(cfg.max_connections >= 1, "peak_link: max_connections must be >= 1");

  std::vector<std::vector<std::pair<double, int>>> picked(n);
  parallel_for(n, [&](int64_t lo, int64_t hi) {
    for (int64_t i = lo; i < hi; ++i) {
      auto& cand = picked[i];
      for (const auto& e : g.adj[i]) {
        if (e.to == i) continue;
        const bool uphill = rho[e.to] > rho[i] || (rho[e.to] == rho[i] && e.to > i);
        if (!uphill || e.w < cfg.link_threshold) continue;
        cand.emplace_back(e.w, e.to);
      }
      std::sort(cand.begin(), cand.end(),
                [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
      if (static_cast<int>(cand.size()) > cfg.max_connections) cand.resize(cfg.max_connections);
    }
  });

  std::vector<LinkEdge> edges;
  for (int i = 0; i < n; ++i)
    for (const auto& [w, j] : picked[i]) edges.push_back({i, j});
  return edges;
}

// ---------------------------------------------------------------------------
// connected_components: union-find over an edge list, ids contiguous by
// smallest member node id.
// ---------------------------------------------------------------------------
inline ClusterAssignment connected_components(const std::vector<LinkEdge>& edges, int n) {
  UnionFind uf(n);
  for (const auto& e : edges) {
    require(e.from >= 0 && e.from < n && e.to >= 0 && e.to < n, "connected_components: edge endpoint out of range");
    uf.merge(e.from, e.to);
  }
  ClusterAssignment out(n, -1);
  std::vector<int> root_label(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    out[i] = root_label[r];
  }
  return out;
}

// threshold_baseline: connected components over all non-self edges with
// weight >= tau.
inline ClusterAssignment threshold_baseline(const WeightedGraph& g, double tau) {
  const int n = g.count();
  std::vector<LinkEdge> edges;
  for (int i = 0; i < n; ++i)
    for (const auto& e : g.adj[i])
      if (e.to != i && e.w >= tau) edges.push_back({i, e.to});
  return connected_components(edges, n);
}

inline int count_singletons(const ClusterAssignment& c) {
  if (c.empty()) return 0;
  const int k = 1 + *std::max_element(c.begin(), c.end());
  std::vector<int> size(k, 0);
  for (int id : c) ++size[id];
  int singles = 0;
  for (int s : size)
    if (s == 1) ++singles;
  return singles;
}

inline int num_clusters(const ClusterAssignment& c) {
  if (c.empty()) return 0;
  return 1 + *std::max_element(c.begin(), c.end());
}

// Density-peak clustering over a similarity/probability graph: density, then
// uphill linking, then connected components.
inline ClusterAssignment density_peak_cluster(const WeightedGraph& g, const DpcConfig& cfg) {
  const DensityVector rho = estimate_density(g, cfg);
  const std::vector<LinkEdge> edges = peak_link(g, rho, cfg);
  return connected_components(edges, g.count());
}

}  // namespace nasa
