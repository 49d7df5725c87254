#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "nasa/cluster.hpp"
#include "nasa/common.hpp"
#include "nasa/graph.hpp"

namespace nasa {

struct FScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  bool degenerate = false;  // a positive-pair set was empty; 0 reported instead of NaN
};

inline double harmonic_f(double p, double r) { return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

namespace detail {

struct Contingency {
  std::vector<int64_t> pred_size;                    // per pred-cluster
  std::vector<int64_t> gt_size;                      // per gt-class (remapped)
  std::unordered_map<int64_t, int64_t> cell;         // (pred, gt) -> count
  std::vector<int> gt_remap;                         // node -> remapped gt class
  std::vector<int> pred_of;                          // node -> pred cluster

  static int64_t key(int p, int g) { return (static_cast<int64_t>(p) << 32) | static_cast<uint32_t>(g); }
};

inline Contingency build_contingency(const ClusterAssignment& pred, const LabelVector& gt) {
  require(pred.size() == gt.size(), "metrics: prediction/label length mismatch");
  Contingency c;
  const int n = static_cast<int>(pred.size());
  c.gt_remap.resize(n);
  c.pred_of = pred;
  std::unordered_map<int, int> gt_ids;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = gt_ids.emplace(gt[i], static_cast<int>(gt_ids.size()));
    c.gt_remap[i] = it->second;
    (void)fresh;
  }
  c.pred_size.assign(num_clusters(pred), 0);
  c.gt_size.assign(gt_ids.size(), 0);
  for (int i = 0; i < n; ++i) {
    ++c.pred_size[pred[i]];
    ++c.gt_size[c.gt_remap[i]];
    ++c.cell[Contingency::key(pred[i], c.gt_remap[i])];
  }
  return c;
}

inline int64_t pairs2(int64_t m) { return m * (m - 1) / 2; }

}  // namespace detail

// ---------------------------------------------------------------------------
// pairwise_f: precision/recall/F over unordered same-cluster node pairs,
// computed from cluster x class contingency counts.
// ---------------------------------------------------------------------------
inline FScoreReport pairwise_f(const ClusterAssignment& pred, const LabelVector& gt) {
  const auto c = detail::build_contingency(pred, gt);
  int64_t same_pred = 0, same_gt = 0, same_both = 0;
  for (int64_t s : c.pred_size) same_pred += detail::pairs2(s);
  for (int64_t s : c.gt_size) same_gt += detail::pairs2(s);
  for (const auto& [k, v] : c.cell) same_both += detail::pairs2(v);

  FScoreReport r;
  r.degenerate = same_pred == 0 || same_gt == 0;
  r.precision = same_pred > 0 ? static_cast<double>(same_both) / static_cast<double>(same_pred) : 0.0;
  r.recall = same_gt > 0 ? static_cast<double>(same_both) / static_cast<double>(same_gt) : 0.0;
  r.f = harmonic_f(r.precision, r.recall);
  return r;
}

// ---------------------------------------------------------------------------
// bcubed_f: per-node precision |cluster(i) ∩ class(i)| / |cluster(i)| and
// recall over |class(i)|, averaged over nodes (node counted in both sets).
// ---------------------------------------------------------------------------
inline FScoreReport bcubed_f(const ClusterAssignment& pred, const LabelVector& gt) {
  const auto c = detail::build_contingency(pred, gt);
  const int n = static_cast<int>(pred.size());
  double psum = 0.0, rsum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int64_t overlap = c.cell.at(detail::Contingency::key(c.pred_of[i], c.gt_remap[i]));
    psum += static_cast<double>(overlap) / static_cast<double>(c.pred_size[c.pred_of[i]]);
    rsum += static_cast<double>(overlap) / static_cast<double>(c.gt_size[c.gt_remap[i]]);
  }
  FScoreReport r;
  r.precision = n > 0 ? psum / n : 0.0;
  r.recall = n > 0 ? rsum / n : 0.0;
  r.f = harmonic_f(r.precision, r.recall);
  return r;
}

// ---------------------------------------------------------------------------
// figure2_sweep: corruption study. For each level, degrade the ground-truth-
// complete subgraphs in precision (recall fixed at 1) and in recall
// (precision fixed at 1), cluster by thresholding the corrupted graphs, and
// report pairwise F plus singleton counts.
// ---------------------------------------------------------------------------
struct SweepRow {
  CorruptMode mode = CorruptMode::drop_precision;
  double level = 1.0;
  double measured_precision = 0.0;
  double measured_recall = 0.0;
  FScoreReport pairwise;
  int singletons = 0;
};

struct SweepConfig {
  double cutoff = 0.5;  // corrupted graphs are 1.0/0.0 weighted
  uint64_t seed = 42;
};

inline std::vector<SweepRow> figure2_sweep(const KnnGraph& knn, const LabelVector& gt,
                                           const SweepConfig& cfg, const std::vector<double>& levels) {
  const WeightedGraph base = intra_label_graph(knn, gt);
  std::vector<SweepRow> rows;
  for (CorruptMode mode : {CorruptMode::drop_precision, CorruptMode::drop_recall}) {
    for (double level : levels) {
      const uint64_t seed = derive_seed(cfg.seed, (mode == CorruptMode::drop_recall ? "sweep-recall-" : "sweep-precision-") +
                                                      std::to_string(level));
      const WeightedGraph g = corrupt_subgraphs(base, gt, mode, level, seed);
      const SubgraphQuality q = subgraph_quality(g, gt, cfg.cutoff);
      const ClusterAssignment c = threshold_baseline(g, cfg.cutoff);
      SweepRow row;
      row.mode = mode;
      row.level = level;
      row.measured_precision = q.precision;
      row.measured_recall = q.recall;
      row.pairwise = pairwise_f(c, gt);
      row.singletons = count_singletons(c);
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "mode,level,subgraph_precision,subgraph_recall,pairwise_f,singletons\n";
  for (const auto& r : rows) {
    out += (r.mode == CorruptMode::drop_recall ? "drop-recall," : "drop-precision,");
    out += std::to_string(r.level) + ',' + std::to_string(r.measured_precision) + ',' +
           std::to_string(r.measured_recall) + ',' + std::to_string(r.pairwise.f) + ',' +
           std::to_string(r.singletons) + '\n';
  }
  return out;
}

}  // namespace nasa
