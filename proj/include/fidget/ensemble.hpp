#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fidget/error.hpp"

namespace fidget {

struct EnsembleConfig {
  int n_trees = 25;
  int max_depth = 4;
  int min_samples_leaf = 2;
  double bootstrap_fraction = 1.0;  // sampled with replacement
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static EnsembleConfig from_json(const nlohmann::json& j);
};

struct TreeNode {
  int feature_idx = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int leaf_label = -1;  // 0/1 when leaf, -1 otherwise

  bool is_leaf() const { return leaf_label >= 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  int predict(const double* x) const;
};

// Bagged CART trees with axis-aligned Gini splits and majority vote.
// Tree t draws its bootstrap sample and per-node feature subsets from a
// stream seeded by derive_seed(cfg.seed, {stream_salt, t}), so training is
// reproducible and trees can be grown in any order.
class Ensemble {
 public:
  Ensemble() = default;

  static Ensemble train(const std::vector<const double*>& rows,
                        const std::vector<int>& labels, int dim,
                        const EnsembleConfig& cfg, std::uint64_t stream_salt);

  // Fraction of trees voting for class 1.
  double votes_one(const double* x, int dim) const;
  // 1 iff votes_one >= 0.5 (ties go to class 1).
  int predict(const double* x, int dim) const;

  int dim() const { return dim_; }
  int tree_count() const { return static_cast<int>(trees_.size()); }

  nlohmann::json trees_json() const;
  static Ensemble from_trees_json(const nlohmann::json& trees, int dim);

 private:
  int dim_ = 0;
  std::vector<DecisionTree> trees_;
};

}  // namespace fidget
