#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "nasa/common.hpp"
#include "nasa/graph.hpp"

namespace nasa {

struct PairSample {
  int i = 0;
  int j = 0;
  std::optional<int> label;  // 1 = same identity, 0 = different
};

// Parameters of the enclosed-subgraph branch.
struct StructuralParams {
  double t2 = 0.0;
  double dist_max = 4.0;
  int k1 = 8;   // hop-1 budget per central
  int k2 = 4;   // hop-2 budget per hop-1 node
  bool descending = false;
  bool order_only = false;  // label nodes by hop order alone

  int length() const { return 2 * (k1 + k1 * k2) + 2; }
};

struct SubgraphNode {
  int id = 0;
  int order = 0;  // 0 = central, 1 = hop-1, 2 = hop-2
};

struct EnclosedSubgraph {
  int i = 0;
  int j = 0;
  std::vector<SubgraphNode> nodes;  // dedup'd at minimum order, centrals first
};

// ---------------------------------------------------------------------------
// enhance_embeddings: f'_i = mean of f_j over neighbors with s_ij >= t1.
// Self sits in every list at similarity 1.0, so the set is never empty. The
// mean is returned raw, not re-normalized.
// ---------------------------------------------------------------------------
inline EmbeddingSet enhance_embeddings(const EmbeddingSet& e, const KnnGraph& knn, double t1) {
  require(t1 > -1.0 && t1 <= 1.0, "enhance_embeddings: t1 outside (-1, 1]");
  const int n = e.count();
  const int d = e.dim();
  require(knn.count() == n, "enhance_embeddings: knn/embedding size mismatch");

  EmbeddingSet out;
  out.x = Matrix(n, d);
  parallel_for(n, [&](int64_t lo, int64_t hi) {
    for (int64_t i = lo; i < hi; ++i) {
      double* acc = out.x.row(static_cast<int>(i));
      int m = 0;
      for (int r = 0; r < knn.k; ++r) {
        if (knn.sim(static_cast<int>(i), r) < t1) break;  // lists sorted by similarity
        const double* f = e.row(knn.id(static_cast<int>(i), r));
        for (int c = 0; c < d; ++c) acc[c] += f[c];
        ++m;
      }
      const double inv = 1.0 / m;
      for (int c = 0; c < d; ++c) acc[c] *= inv;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// make_enhanced_pair: [f_i | f'_i | f_j | f'_j], length 4D.
// ---------------------------------------------------------------------------
inline void make_enhanced_pair(const EmbeddingSet& e, const EmbeddingSet& enh, int i, int j, double* out) {
  const int d = e.dim();
  std::copy_n(e.row(i), d, out);
  std::copy_n(enh.row(i), d, out + d);
  std::copy_n(e.row(j), d, out + 2 * d);
  std::copy_n(enh.row(j), d, out + 3 * d);
}

inline std::vector<double> make_enhanced_pair(const EmbeddingSet& e, const EmbeddingSet& enh, int i, int j) {
  require(i != j, "make_enhanced_pair: i == j");
  require(i >= 0 && i < e.count() && j >= 0 && j < e.count(), "make_enhanced_pair: index out of range");
  require(enh.count() == e.count() && enh.dim() == e.dim(), "make_enhanced_pair: enhanced set mismatch");
  std::vector<double> out(static_cast<size_t>(4) * e.dim());
  make_enhanced_pair(e, enh, i, j, out.data());
  return out;
}

namespace detail {

// id -> similarity lookup for one node's kNN list
struct SimLookup {
  std::vector<std::pair<int, double>> entries;  // sorted by id

  SimLookup(const KnnGraph& knn, int node) {
    entries.reserve(knn.k);
    for (int r = 0; r < knn.k; ++r) entries.emplace_back(knn.id(node, r), knn.sim(node, r));
    std::sort(entries.begin(), entries.end());
  }

  // similarity if present, otherwise nullopt (treated as below threshold)
  std::optional<double> find(int id) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), std::make_pair(id, -2.0));
    if (it != entries.end() && it->first == id) return it->second;
    return std::nullopt;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// enclosed_subgraph: hop-1 nodes are each central's top-k1 non-central
// neighbors at or above t2; hop-2 nodes are each hop-1 node's top-k2
// neighbors at or above t2. Nodes reappearing at a later hop keep their
// minimum order.
// ---------------------------------------------------------------------------
inline EnclosedSubgraph enclosed_subgraph(int i, int j, const KnnGraph& knn, const StructuralParams& p) {
  require(i != j, "enclosed_subgraph: i == j");
  require(p.k1 <= knn.k, "enclosed_subgraph: k1 exceeds list length");
  require(p.k1 >= 0 && p.k2 >= 0, "enclosed_subgraph: negative hop budget");
  bool j_in_i = false;
  for (int r = 0; r < knn.k; ++r)
    if (knn.id(i, r) == j) {
      j_in_i = true;
      break;
    }
  require(j_in_i, "enclosed_subgraph: j is not a neighbor of i");

  EnclosedSubgraph sub;
  sub.i = i;
  sub.j = j;
  std::vector<int> seen;  // ids present, kept sorted
  auto present = [&](int id) {
    auto it = std::lower_bound(seen.begin(), seen.end(), id);
    return it != seen.end() && *it == id;
  };
  auto insert = [&](int id, int order) {
    auto it = std::lower_bound(seen.begin(), seen.end(), id);
    if (it != seen.end() && *it == id) return false;
    seen.insert(it, id);
    sub.nodes.push_back({id, order});
    return true;
  };

  insert(i, 0);
  insert(j, 0);

  auto take_hop = [&](int center, int budget, int order) {
    int taken = 0;
    for (int r = 1; r < knn.k && taken < budget; ++r) {
      const double s = knn.sim(center, r);
      if (s < p.t2) break;  // sorted, nothing further qualifies
      const int cand = knn.id(center, r);
      if (order == 1 && (cand == i || cand == j)) continue;  // centrals never consume hop-1 budget
      ++taken;
      if (!present(cand)) insert(cand, order);
    }
  };

  take_hop(i, p.k1, 1);
  take_hop(j, p.k1, 1);

  const size_t hop1_end = sub.nodes.size();
  for (size_t t = 2; t < hop1_end; ++t) take_hop(sub.nodes[t].id, p.k2, 2);
  return sub;
}

// ---------------------------------------------------------------------------
// structural_feature: label every subgraph node with
//   dist_n = (dist_in + dist_jn) / 2 + O_n,
// where dist_xn is the looked-up similarity when n is in K(v_x) and at least
// t2, else dist_max; a central's own term is s_xx = 1. The labels are sorted
// (ascending by default, ties by node id), truncated to the smallest
// p.length() values, and padded with 0.0.
// ---------------------------------------------------------------------------
inline std::vector<double> structural_feature(const EnclosedSubgraph& sub, const KnnGraph& knn,
                                              const StructuralParams& p) {
  const detail::SimLookup sim_i(knn, sub.i);
  const detail::SimLookup sim_j(knn, sub.j);

  auto side = [&](int central, const detail::SimLookup& lut, int n) {
    if (n == central) return 1.0;
    const auto s = lut.find(n);
    return (s && *s >= p.t2) ? *s : p.dist_max;
  };

  std::vector<std::pair<double, int>> dists;
  dists.reserve(sub.nodes.size());
  for (const auto& node : sub.nodes) {
    double d;
    if (p.order_only) {
      d = static_cast<double>(node.order);
    } else {
      d = 0.5 * (side(sub.i, sim_i, node.id) + side(sub.j, sim_j, node.id)) + node.order;
    }
    dists.emplace_back(d, node.id);
  }
  std::sort(dists.begin(), dists.end());

  const int len = p.length();
  if (static_cast<int>(dists.size()) > len) dists.resize(len);  // keep the smallest
  if (p.descending) std::reverse(dists.begin(), dists.end());

  std::vector<double> out(static_cast<size_t>(len), 0.0);
  for (size_t t = 0; t < dists.size(); ++t) out[t] = dists[t].first;
  return out;
}

// ---------------------------------------------------------------------------
// generate_pairs: one sample per (node, non-self neighbor), node-major then
// rank order, N*(k-1) samples. Labels attached when ground truth is given.
// ---------------------------------------------------------------------------
inline std::vector<PairSample> generate_pairs(const KnnGraph& knn, const LabelVector* gt = nullptr) {
  const int n = knn.count();
  if (gt) require(static_cast<int>(gt->size()) == n, "generate_pairs: label count mismatch");
  std::vector<PairSample> out;
  out.reserve(static_cast<size_t>(n) * (knn.k - 1));
  for (int i = 0; i < n; ++i)
    for (int r = 1; r < knn.k; ++r) {
      PairSample s;
      s.i = i;
      s.j = knn.id(i, r);
      if (gt) s.label = (*gt)[i] == (*gt)[s.j] ? 1 : 0;
      out.push_back(s);
    }
  return out;
}

}  // namespace nasa
