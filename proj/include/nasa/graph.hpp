#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nasa/common.hpp"

namespace nasa {

// N x D set of unit-norm feature rows.
struct EmbeddingSet {
  Matrix x;

  EmbeddingSet() = default;
  explicit EmbeddingSet(Matrix m) : x(std::move(m)) {}

  int count() const { return x.rows; }
  int dim() const { return x.cols; }
  const double* row(int i) const { return x.row(i); }
  double* row(int i) { return x.row(i); }
};

using LabelVector = std::vector<int>;

// Per-node top-k neighbor lists, self at rank 0 with similarity exactly 1.0,
// then non-increasing similarity with ties broken by ascending node id.
struct KnnGraph {
  int k = 0;
  std::vector<int> ids;      // n*k
  std::vector<double> sims;  // n*k

  int count() const { return k == 0 ? 0 : static_cast<int>(ids.size()) / k; }
  int id(int node, int rank) const { return ids[static_cast<size_t>(node) * k + rank]; }
  double sim(int node, int rank) const { return sims[static_cast<size_t>(node) * k + rank]; }
};

struct WeightedEdge {
  int to = 0;
  double w = 0.0;
};

// Directed adjacency lists with arbitrary edge weights. Self edges (weight
// 1.0) are kept when the graph mirrors a kNN topology; all measurement ops
// skip them.
struct WeightedGraph {
  std::vector<std::vector<WeightedEdge>> adj;

  int count() const { return static_cast<int>(adj.size()); }
};

// ---------------------------------------------------------------------------
// normalize_rows
// ---------------------------------------------------------------------------
inline EmbeddingSet normalize_rows(Matrix m) {
  for (int i = 0; i < m.rows; ++i) {
    double* r = m.row(i);
    for (int j = 0; j < m.cols; ++j)
      require(std::isfinite(r[j]), "normalize_rows: non-finite entry in row " + std::to_string(i));
    const double n = l2_norm(r, m.cols);
    require(n > 1e-12, "normalize_rows: zero row at index " + std::to_string(i));
    const double inv = 1.0 / n;
    for (int j = 0; j < m.cols; ++j) r[j] *= inv;
  }
  return EmbeddingSet(std::move(m));
}

// ---------------------------------------------------------------------------
// cosine_similarity: dot product of unit vectors, clamped to [-1, 1]
// ---------------------------------------------------------------------------
inline double cosine_similarity(const double* u, const double* v, int dim) {
  return std::clamp(dot(u, v, dim), -1.0, 1.0);
}

inline double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v) {
  require(u.size() == v.size(), "cosine_similarity: dimension mismatch");
  return cosine_similarity(u.data(), v.data(), static_cast<int>(u.size()));
}

// ---------------------------------------------------------------------------
// build_knn: exact top-k by cosine similarity, self pinned at rank 0 with
// similarity exactly 1.0, remaining ranks ordered by (similarity desc, id
// asc). Similarities are computed in blocked passes (block_size x N scratch)
// and rows are processed data-parallel; output is identical for any block
// size or thread count.
// ---------------------------------------------------------------------------
inline KnnGraph build_knn(const EmbeddingSet& e, int k, int block_size = 256) {
  const int n = e.count();
  const int d = e.dim();
  require(k >= 1, "build_knn: k must be >= 1");
  require(k <= n, "build_knn: k exceeds node count");
  require(block_size >= 1, "build_knn: block size must be >= 1");

  KnnGraph g;
  g.k = k;
  g.ids.resize(static_cast<size_t>(n) * k);
  g.sims.resize(static_cast<size_t>(n) * k);

  // candidate ordering: higher similarity first, then lower id
  auto better = [](double s1, int i1, double s2, int i2) {
    return s1 > s2 || (s1 == s2 && i1 < i2);
  };

  for (int b0 = 0; b0 < n; b0 += block_size) {
    const int b1 = std::min(n, b0 + block_size);
    Matrix scratch(b1 - b0, n);
    parallel_for(b1 - b0, [&](int64_t lo, int64_t hi) {
      std::vector<std::pair<double, int>> heap;  // worst candidate on top
      auto worse_first = [&](const std::pair<double, int>& a, const std::pair<double, int>& b) {
        return better(a.first, a.second, b.first, b.second);
      };
      for (int64_t bi = lo; bi < hi; ++bi) {
        const int i = b0 + static_cast<int>(bi);
        double* srow = scratch.row(static_cast<int>(bi));
        const double* xi = e.row(i);
        for (int j = 0; j < n; ++j)
          srow[j] = std::clamp(dot(xi, e.row(j), d), -1.0, 1.0);

        heap.clear();
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const double s = srow[j];
          if (static_cast<int>(heap.size()) < k - 1) {
            heap.emplace_back(s, j);
            std::push_heap(heap.begin(), heap.end(), worse_first);
          } else if (k > 1 && better(s, j, heap.front().first, heap.front().second)) {
            std::pop_heap(heap.begin(), heap.end(), worse_first);
            heap.back() = {s, j};
            std::push_heap(heap.begin(), heap.end(), worse_first);
          }
        }
        std::sort(heap.begin(), heap.end(), [&](const auto& a, const auto& b) {
          return better(a.first, a.second, b.first, b.second);
        });

        const size_t base = static_cast<size_t>(i) * k;
        g.ids[base] = i;
        g.sims[base] = 1.0;
        for (int r = 1; r < k; ++r) {
          g.ids[base + r] = heap[r - 1].second;
          g.sims[base + r] = heap[r - 1].first;
        }
      }
    });
  }
  return g;
}

// WeightedGraph view of a kNN graph with the raw cosine similarities as
// weights (self edge kept at 1.0).
inline WeightedGraph similarity_graph(const KnnGraph& knn) {
  WeightedGraph g;
  const int n = knn.count();
  g.adj.resize(n);
  for (int i = 0; i < n; ++i) {
    g.adj[i].reserve(knn.k);
    for (int r = 0; r < knn.k; ++r) g.adj[i].push_back({knn.id(i, r), knn.sim(i, r)});
  }
  return g;
}

// Same topology truncated to the first k ranks of each list (self included).
inline KnnGraph truncate_knn(const KnnGraph& knn, int k) {
  require(k >= 1 && k <= knn.k, "truncate_knn: k out of range");
  KnnGraph g;
  g.k = k;
  const int n = knn.count();
  g.ids.resize(static_cast<size_t>(n) * k);
  g.sims.resize(static_cast<size_t>(n) * k);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < k; ++r) {
      g.ids[static_cast<size_t>(i) * k + r] = knn.id(i, r);
      g.sims[static_cast<size_t>(i) * k + r] = knn.sim(i, r);
    }
  return g;
}

// Ground-truth-complete starting graph for the corruption study: exactly the
// intra-label directed kNN edges, weight 1.0, no self edges. Its subgraph
// precision and recall are both 1 by construction.
inline WeightedGraph intra_label_graph(const KnnGraph& knn, const LabelVector& gt) {
  const int n = knn.count();
  require(static_cast<int>(gt.size()) == n, "intra_label_graph: label count mismatch");
  WeightedGraph g;
  g.adj.resize(n);
  for (int i = 0; i < n; ++i)
    for (int r = 1; r < knn.k; ++r) {
      const int j = knn.id(i, r);
      if (gt[i] == gt[j]) g.adj[i].push_back({j, 1.0});
    }
  return g;
}

// ---------------------------------------------------------------------------
// subgraph_quality: precision/recall of the edges kept at `cutoff` against
// ground-truth labels. Kept = non-self directed edges with weight >= cutoff.
// Recall is measured against all same-label non-self edges present in g
// (any weight), so graphs that down-weight dropped edges keep a meaningful
// denominator.
// ---------------------------------------------------------------------------
struct SubgraphQuality {
  double precision = 0.0;
  double recall = 0.0;
  int64_t kept = 0;
  int64_t kept_true = 0;
  int64_t true_total = 0;
};

inline SubgraphQuality subgraph_quality(const WeightedGraph& g, const LabelVector& gt, double cutoff) {
  const int n = g.count();
  require(static_cast<int>(gt.size()) == n, "subgraph_quality: label count mismatch");
  SubgraphQuality q;
  for (int i = 0; i < n; ++i)
    for (const auto& e : g.adj[i]) {
      if (e.to == i) continue;
      const bool same = gt[i] == gt[e.to];
      if (same) ++q.true_total;
      if (e.w >= cutoff) {
        ++q.kept;
        if (same) ++q.kept_true;
      }
    }
  require_state(q.kept > 0, "subgraph_quality: no edges at or above cutoff, precision undefined");
  q.precision = static_cast<double>(q.kept_true) / static_cast<double>(q.kept);
  q.recall = q.true_total > 0 ? static_cast<double>(q.kept_true) / static_cast<double>(q.true_total) : 0.0;
  return q;
}

// ---------------------------------------------------------------------------
// corrupt_subgraphs: degrade an intra-label-complete graph to a target
// subgraph recall or precision.
//
//   drop-recall:    down-weights random true edges to 0.0 until the recall at
//                   cutoff 0.5 is within one edge of `target`.
//   drop-precision: injects random cross-label directed edges at weight 1.0
//                   until the precision at cutoff 0.5 is within one edge of
//                   `target`.
//
// Kept edges carry weight 1.0, dropped ones 0.0, so subgraph_quality and the
// threshold baseline both read the corrupted graph at cutoff 0.5.
// ---------------------------------------------------------------------------
enum class CorruptMode { drop_recall, drop_precision };

inline WeightedGraph corrupt_subgraphs(const WeightedGraph& g, const LabelVector& gt, CorruptMode mode,
                                       double target, uint64_t seed) {
  require(target > 0.0 && target <= 1.0, "corrupt_subgraphs: target outside (0, 1]");
  const int n = g.count();
  require(static_cast<int>(gt.size()) == n, "corrupt_subgraphs: label count mismatch");

  WeightedGraph out = g;
  if (target == 1.0) return out;

  int64_t n_true = 0;
  for (int i = 0; i < n; ++i)
    for (const auto& e : out.adj[i])
      if (e.to != i) ++n_true;

  Rng rng(seed);
  if (mode == CorruptMode::drop_recall) {
    std::vector<std::pair<int, int>> slots;  // (node, position in list)
    slots.reserve(static_cast<size_t>(n_true));
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < static_cast<int>(out.adj[i].size()); ++p)
        if (out.adj[i][p].to != i) slots.emplace_back(i, p);
    rng.shuffle(slots);
    const int64_t keep = std::llround(target * static_cast<double>(n_true));
    const int64_t drop = n_true - keep;
    for (int64_t t = 0; t < drop; ++t) out.adj[slots[t].first][slots[t].second].w = 0.0;
  } else {
    const int64_t wanted = std::llround(static_cast<double>(n_true) * (1.0 - target) / target);
    int64_t added = 0;
    int64_t attempts = 0;
    const int64_t attempt_cap = 1000 * (wanted + 1) + 1000000;
    while (added < wanted) {
      require_state(++attempts < attempt_cap,
                    "corrupt_subgraphs: could not find enough cross-label pairs to inject");
      const int i = static_cast<int>(rng.uniform_int(0, n - 1));
      const int j = static_cast<int>(rng.uniform_int(0, n - 1));
      if (i == j || gt[i] == gt[j]) continue;
      bool present = false;
      for (const auto& e : out.adj[i])
        if (e.to == j) {
          present = true;
          break;
        }
      if (present) continue;
      out.adj[i].push_back({j, 1.0});
      ++added;
    }
  }
  return out;
}

}  // namespace nasa
