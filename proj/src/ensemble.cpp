#include "fidget/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fidget/rng.hpp"

namespace fidget {

void EnsembleConfig::validate() const {
  if (n_trees < 1) fail(ErrorCode::InvalidArgument, "n_trees must be >= 1");
  if (max_depth < 1) fail(ErrorCode::InvalidArgument, "max_depth must be >= 1");
  if (min_samples_leaf < 1) {
    fail(ErrorCode::InvalidArgument, "min_samples_leaf must be >= 1");
  }
  if (!(bootstrap_fraction > 0.0)) {
    fail(ErrorCode::InvalidArgument, "bootstrap_fraction must be > 0");
  }
}

nlohmann::json EnsembleConfig::to_json() const {
  return {{"n_trees", n_trees},
          {"max_depth", max_depth},
          {"min_samples_leaf", min_samples_leaf},
          {"bootstrap_fraction", bootstrap_fraction},
          {"seed", seed}};
}

EnsembleConfig EnsembleConfig::from_json(const nlohmann::json& j) {
  EnsembleConfig cfg;
  try {
    cfg.n_trees = j.at("n_trees").get<int>();
    cfg.max_depth = j.at("max_depth").get<int>();
    cfg.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    cfg.bootstrap_fraction = j.at("bootstrap_fraction").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("bad ensemble config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

int DecisionTree::predict(const double* x) const {
  int i = 0;
  while (!nodes[i].is_leaf()) {
    i = x[nodes[i].feature_idx] < nodes[i].threshold ? nodes[i].left
                                                     : nodes[i].right;
  }
  return nodes[i].leaf_label;
}

namespace {

struct TreeBuilder {
  const std::vector<const double*>& rows;
  const std::vector<int>& labels;
  int dim;
  const EnsembleConfig& cfg;
  int features_per_split;
  Rng& rng;
  std::vector<TreeNode> nodes;
  std::vector<std::pair<double, int>> scratch;  // (value, label) sort buffer

  int make_leaf(long c0, long c1) {
    TreeNode leaf;
    leaf.leaf_label = c1 >= c0 ? 1 : 0;  // tie goes to the abnormal class
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size()) - 1;
  }

  std::vector<int> sample_features() {
    std::vector<int> all(dim);
    std::iota(all.begin(), all.end(), 0);
    const int k = std::min(features_per_split, dim);
    for (int i = 0; i < k; ++i) {
      const int j =
          i + static_cast<int>(rng.below(static_cast<std::uint64_t>(dim - i)));
      std::swap(all[i], all[j]);
    }
    all.resize(k);
    return all;
  }

  int build(std::vector<int>& idx, int depth) {
    const long n = static_cast<long>(idx.size());
    long c1 = 0;
    for (int i : idx) c1 += labels[i];
    const long c0 = n - c1;
    if (depth >= cfg.max_depth || c0 == 0 || c1 == 0 ||
        n < 2L * cfg.min_samples_leaf) {
      return make_leaf(c0, c1);
    }

    const auto candidates = sample_features();
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();
    for (int f : candidates) {
      scratch.clear();
      for (int i : idx) scratch.emplace_back(rows[i][f], labels[i]);
      std::sort(scratch.begin(), scratch.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      long left1 = 0;
      for (long i = 1; i < n; ++i) {
        left1 += scratch[i - 1].second;
        if (scratch[i].first == scratch[i - 1].first) continue;
        const long nl = i;
        const long nr = n - i;
        if (nl < cfg.min_samples_leaf || nr < cfg.min_samples_leaf) continue;
        const double pl = static_cast<double>(left1) / nl;
        const double pr = static_cast<double>(c1 - left1) / nr;
        const double gini_l = 2.0 * pl * (1.0 - pl);
        const double gini_r = 2.0 * pr * (1.0 - pr);
        const double impurity = (nl * gini_l + nr * gini_r) / n;
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = f;
          double thr = 0.5 * (scratch[i - 1].first + scratch[i].first);
          // Midpoint can round down onto the left value; push it up so the
          // split keeps exactly i samples on the left.
          if (!(scratch[i - 1].first < thr)) thr = scratch[i].first;
          best_threshold = thr;
        }
      }
    }
    if (best_feature < 0) return make_leaf(c0, c1);

    std::vector<int> left_idx, right_idx;
    left_idx.reserve(idx.size());
    right_idx.reserve(idx.size());
    for (int i : idx) {
      (rows[i][best_feature] < best_threshold ? left_idx : right_idx)
          .push_back(i);
    }
    const int node = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[node].feature_idx = best_feature;
    nodes[node].threshold = best_threshold;
    const int left = build(left_idx, depth + 1);
    const int right = build(right_idx, depth + 1);
    nodes[node].left = left;
    nodes[node].right = right;
    return node;
  }
};

}  // namespace

Ensemble Ensemble::train(const std::vector<const double*>& rows,
                         const std::vector<int>& labels, int dim,
                         const EnsembleConfig& cfg, std::uint64_t stream_salt) {
  cfg.validate();
  if (rows.empty()) fail(ErrorCode::EmptyDataset, "no training samples");
  if (rows.size() != labels.size()) {
    fail(ErrorCode::InvalidArgument, "rows and labels disagree in size");
  }
  const long total1 = std::accumulate(labels.begin(), labels.end(), 0L);
  if (total1 == 0 || total1 == static_cast<long>(labels.size())) {
    fail(ErrorCode::SingleClass,
         "training data contains only one class (" +
             std::string(total1 == 0 ? "FM+" : "FM-") + ")");
  }

  Ensemble e;
  e.dim_ = dim;
  e.trees_.reserve(cfg.n_trees);
  const long n = static_cast<long>(rows.size());
  const long m = std::max(
      1L, static_cast<long>(std::llround(cfg.bootstrap_fraction * n)));
  const int features_per_split =
      static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dim))));
  for (int t = 0; t < cfg.n_trees; ++t) {
    Rng rng(derive_seed(cfg.seed, {stream_salt, static_cast<std::uint64_t>(t)}));
    std::vector<int> idx(m);
    for (long i = 0; i < m; ++i) {
      idx[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    }
    TreeBuilder builder{rows, labels, dim, cfg, features_per_split, rng, {}, {}};
    builder.build(idx, 0);
    e.trees_.push_back(DecisionTree{std::move(builder.nodes)});
  }
  return e;
}

double Ensemble::votes_one(const double* x, int dim) const {
  if (trees_.empty()) fail(ErrorCode::EmptyDataset, "ensemble has no trees");
  if (dim != dim_) {
    fail(ErrorCode::DimensionMismatch,
         "input has dimension " + std::to_string(dim) + ", model expects " +
             std::to_string(dim_));
  }
  long ones = 0;
  for (const auto& tree : trees_) ones += tree.predict(x);
  return static_cast<double>(ones) / static_cast<double>(trees_.size());
}

int Ensemble::predict(const double* x, int dim) const {
  return votes_one(x, dim) >= 0.5 ? 1 : 0;
}

nlohmann::json Ensemble::trees_json() const {
  auto trees = nlohmann::json::array();
  for (const auto& tree : trees_) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"leaf_label", n.leaf_label}});
      } else {
        nodes.push_back({{"feature_idx", n.feature_idx},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
      }
    }
    trees.push_back({{"nodes", nodes}});
  }
  return trees;
}

Ensemble Ensemble::from_trees_json(const nlohmann::json& trees, int dim) {
  Ensemble e;
  e.dim_ = dim;
  try {
    for (const auto& tj : trees) {
      DecisionTree tree;
      for (const auto& nj : tj.at("nodes")) {
        TreeNode n;
        if (nj.contains("leaf_label")) {
          n.leaf_label = nj.at("leaf_label").get<int>();
        } else {
          n.feature_idx = nj.at("feature_idx").get<int>();
          n.threshold = nj.at("threshold").get<double>();
          n.left = nj.at("left").get<int>();
          n.right = nj.at("right").get<int>();
        }
        tree.nodes.push_back(n);
      }
      if (tree.nodes.empty()) {
        fail(ErrorCode::Schema, "tree with no nodes in model file");
      }
      e.trees_.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::Schema, std::string("bad model trees: ") + ex.what());
  }
  if (e.trees_.empty()) fail(ErrorCode::Schema, "model file has no trees");
  return e;
}

}  // namespace fidget
