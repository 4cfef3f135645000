#ifndef APSCHED_DECISION_TREE_HPP
#define APSCHED_DECISION_TREE_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace apsched {

/// Dense binary-labelled examples, row-major.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<double> x;
  std::vector<int> y;

  std::size_t dim() const { return feature_names.size(); }
  std::size_t size() const { return y.size(); }
  std::span<const double> row(std::size_t i) const { return {x.data() + i * dim(), dim()}; }
  void add(std::span<const double> features, int label);
  std::size_t num_positive() const;
  /// Rows [begin, end) in order.
  Dataset slice(std::size_t begin, std::size_t end) const;
  /// Rows outside [begin, end) in order.
  Dataset without(std::size_t begin, std::size_t end) const;
};

/// Header row of feature names plus "label", one row per example.
void write_csv(const std::string& path, const Dataset& data);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double probability = 0.0;  // positive-class rate of the training samples here
  std::size_t count = 0;

  bool leaf() const { return feature < 0; }
};

/// CART classifier with Gini splits. `x[feature] <= threshold` goes left.
class DecisionTree {
 public:
  DecisionTree() = default;

  static DecisionTree train(const Dataset& data, std::size_t min_leaf);
  /// Tree assembled by hand, for fixtures. Node 0 is the root.
  static DecisionTree from_nodes(std::vector<TreeNode> nodes, std::size_t dim, std::size_t min_leaf);

  double predict_proba(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return predict_proba(x) >= 0.5 ? 1 : 0; }
  double accuracy(const Dataset& data) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t dim() const { return dim_; }
  std::size_t min_leaf() const { return min_leaf_; }
  std::size_t num_leaves() const;
  int depth() const;
  bool empty() const { return nodes_.empty(); }

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
  std::size_t dim_ = 0;
  std::size_t min_leaf_ = 1;
};

inline const std::vector<std::size_t>& default_min_leaf_grid() {
  static const std::vector<std::size_t> grid = {1, 5, 10, 25, 50, 100, 250, 500, 1000};
  return grid;
}

struct CvEntry {
  std::size_t requested = 0;
  std::size_t used = 0;  // after clamping to the training-fold size
  double mean_accuracy = 0.0;
};

struct CvResult {
  std::size_t best_min_leaf = 1;
  std::vector<CvEntry> table;
};

/// 5-fold contiguous cross-validation over `grid`. Highest mean accuracy
/// wins; ties go to the larger min_leaf. Requires at least `folds` examples.
CvResult cross_validate_min_leaf(const Dataset& data, const std::vector<std::size_t>& grid = default_min_leaf_grid(),
                                 int folds = 5);

}  // namespace apsched

#endif  // APSCHED_DECISION_TREE_HPP
