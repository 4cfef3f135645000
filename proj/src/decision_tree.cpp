#include "apsched/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>

namespace apsched {

void Dataset::add(std::span<const double> features, int label) {
  if (features.size() != dim()) throw std::invalid_argument("feature vector length does not match dataset");
  x.insert(x.end(), features.begin(), features.end());
  y.push_back(label);
}

std::size_t Dataset::num_positive() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
  Dataset d;
  d.feature_names = feature_names;
  d.x.assign(x.begin() + static_cast<std::ptrdiff_t>(begin * dim()), x.begin() + static_cast<std::ptrdiff_t>(end * dim()));
  d.y.assign(y.begin() + static_cast<std::ptrdiff_t>(begin), y.begin() + static_cast<std::ptrdiff_t>(end));
  return d;
}

Dataset Dataset::without(std::size_t begin, std::size_t end) const {
  Dataset d;
  d.feature_names = feature_names;
  d.x.reserve(x.size() - (end - begin) * dim());
  for (std::size_t i = 0; i < size(); ++i) {
    if (i >= begin && i < end) continue;
    d.add(row(i), y[i]);
  }
  return d;
}

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& name : data.feature_names) out << name << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    out << data.y[i] << '\n';
  }
}

namespace {

double gini_sum(double n, double pos) {
  if (n <= 0.0) return 0.0;
  return 2.0 * pos * (n - pos) / n;
}

struct Task {
  int node;
  std::size_t lo, hi;
};

}  // namespace

DecisionTree DecisionTree::train(const Dataset& data, std::size_t min_leaf) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  if (n == 0) throw std::invalid_argument("cannot train a tree on an empty dataset");
  DecisionTree tree;
  tree.dim_ = d;
  tree.min_leaf_ = std::clamp<std::size_t>(min_leaf, 1, n);
  const std::size_t ml = tree.min_leaf_;

  auto value = [&](std::uint32_t i, std::size_t f) { return data.x[i * d + f]; };

  // sorted[f] holds sample indices ordered by feature f; each node owns the
  // same [lo, hi) range in every one of them.
  std::vector<std::vector<std::uint32_t>> sorted(d, std::vector<std::uint32_t>(n));
  for (std::size_t f = 0; f < d; ++f) {
    auto& s = sorted[f];
    std::iota(s.begin(), s.end(), 0U);
    std::stable_sort(s.begin(), s.end(), [&](std::uint32_t a, std::uint32_t b) { return value(a, f) < value(b, f); });
  }
  std::vector<std::uint32_t> scratch(n);
  std::vector<char> goes_left(n, 0);
  const std::vector<std::uint32_t> order = [&] {
    std::vector<std::uint32_t> o(n);
    std::iota(o.begin(), o.end(), 0U);
    return o;
  }();

  tree.nodes_.push_back({});
  std::vector<Task> stack{{0, 0, n}};
  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    const std::size_t count = task.hi - task.lo;
    std::size_t pos = 0;
    const auto& any = d > 0 ? sorted[0] : order;
    for (std::size_t k = task.lo; k < task.hi; ++k) pos += static_cast<std::size_t>(data.y[any[k]] == 1);
    {
      TreeNode& node = tree.nodes_[static_cast<std::size_t>(task.node)];
      node.count = count;
      node.probability = static_cast<double>(pos) / static_cast<double>(count);
    }
    if (pos == 0 || pos == count || count < 2 * ml) continue;

    int best_feature = -1;
    std::size_t best_left = 0;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < d; ++f) {
      const auto& s = sorted[f];
      std::size_t left_pos = 0;
      for (std::size_t k = task.lo; k + 1 < task.hi; ++k) {
        left_pos += static_cast<std::size_t>(data.y[s[k]] == 1);
        const std::size_t nl = k - task.lo + 1;
        const std::size_t nr = count - nl;
        if (nl < ml) continue;
        if (nr < ml) break;
        const double a = value(s[k], f);
        const double b = value(s[k + 1], f);
        if (!(a < b)) continue;
        const double imp = gini_sum(static_cast<double>(nl), static_cast<double>(left_pos)) +
                           gini_sum(static_cast<double>(nr), static_cast<double>(pos - left_pos));
        if (imp < best_impurity) {
          best_impurity = imp;
          best_feature = static_cast<int>(f);
          best_left = nl;
          double t = a + (b - a) / 2.0;
          if (!(t < b)) t = a;
          best_threshold = t;
        }
      }
    }
    if (best_feature < 0) continue;

    const auto& bs = sorted[static_cast<std::size_t>(best_feature)];
    for (std::size_t k = task.lo; k < task.hi; ++k) goes_left[bs[k]] = k < task.lo + best_left ? 1 : 0;
    for (std::size_t f = 0; f < d; ++f) {
      auto& s = sorted[f];
      std::size_t l = task.lo;
      std::size_t r = 0;
      for (std::size_t k = task.lo; k < task.hi; ++k) {
        if (goes_left[s[k]]) {
          s[l++] = s[k];
        } else {
          scratch[r++] = s[k];
        }
      }
      std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(r), s.begin() + static_cast<std::ptrdiff_t>(l));
    }

    const int left = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back({});
    const int right = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back({});
    TreeNode& node = tree.nodes_[static_cast<std::size_t>(task.node)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    stack.push_back({right, task.lo + best_left, task.hi});
    stack.push_back({left, task.lo, task.lo + best_left});
  }
  return tree;
}

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes, std::size_t dim, std::size_t min_leaf) {
  if (nodes.empty()) throw std::invalid_argument("tree needs at least one node");
  for (const auto& n : nodes) {
    if (n.leaf()) continue;
    const auto ok = [&](int c) { return c > 0 && static_cast<std::size_t>(c) < nodes.size(); };
    if (static_cast<std::size_t>(n.feature) >= dim || !ok(n.left) || !ok(n.right) || !std::isfinite(n.threshold)) {
      throw std::invalid_argument("malformed tree node");
    }
  }
  DecisionTree t;
  t.nodes_ = std::move(nodes);
  t.dim_ = dim;
  t.min_leaf_ = std::max<std::size_t>(1, min_leaf);
  return t;
}

double DecisionTree::predict_proba(std::span<const double> x) const {
  if (nodes_.empty()) throw std::logic_error("predict on an untrained tree");
  if (x.size() != dim_) throw std::invalid_argument("feature vector length does not match tree");
  const TreeNode* node = &nodes_[0];
  while (!node->leaf()) {
    const int next = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right;
    node = &nodes_[static_cast<std::size_t>(next)];
  }
  return node->probability;
}

double DecisionTree::accuracy(const Dataset& data) const {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) correct += static_cast<std::size_t>(predict(data.row(i)) == data.y[i]);
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::size_t DecisionTree::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.leaf(); }));
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  int best = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(id)];
    best = std::max(best, depth);
    if (!n.leaf()) {
      stack.push_back({n.left, depth + 1});
      stack.push_back({n.right, depth + 1});
    }
  }
  return best;
}

namespace {

nlohmann::json node_json(const std::vector<TreeNode>& nodes, int id) {
  const auto& n = nodes[static_cast<std::size_t>(id)];
  nlohmann::json j = {{"probability", n.probability}, {"count", n.count}};
  if (!n.leaf()) {
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["left"] = node_json(nodes, n.left);
    j["right"] = node_json(nodes, n.right);
  }
  return j;
}

int read_node(const nlohmann::json& j, std::vector<TreeNode>& nodes) {
  const int id = static_cast<int>(nodes.size());
  nodes.push_back({});
  TreeNode n;
  n.probability = j.at("probability").get<double>();
  n.count = j.at("count").get<std::size_t>();
  if (j.contains("feature")) {
    n.feature = j.at("feature").get<int>();
    n.threshold = j.at("threshold").get<double>();
    n.left = read_node(j.at("left"), nodes);
    n.right = read_node(j.at("right"), nodes);
  }
  nodes[static_cast<std::size_t>(id)] = n;
  return id;
}

}  // namespace

nlohmann::json DecisionTree::to_json() const {
  return {{"dim", dim_}, {"min_leaf", min_leaf_}, {"root", nodes_.empty() ? nlohmann::json() : node_json(nodes_, 0)}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  std::vector<TreeNode> nodes;
  read_node(j.at("root"), nodes);
  return from_nodes(std::move(nodes), j.at("dim").get<std::size_t>(), j.at("min_leaf").get<std::size_t>());
}

CvResult cross_validate_min_leaf(const Dataset& data, const std::vector<std::size_t>& grid, int folds) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  const std::size_t n = data.size();
  if (n < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("cross-validation needs at least " + std::to_string(folds) + " examples, got " +
                                std::to_string(n));
  }
  if (grid.empty()) throw std::invalid_argument("empty min_leaf grid");
  const std::size_t k = static_cast<std::size_t>(folds);
  std::vector<Dataset> train_sets, test_sets;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t b = f * n / k;
    const std::size_t e = (f + 1) * n / k;
    test_sets.push_back(data.slice(b, e));
    train_sets.push_back(data.without(b, e));
  }
  std::size_t smallest_train = n;
  for (const auto& t : train_sets) smallest_train = std::min(smallest_train, t.size());

  CvResult result;
  std::map<std::size_t, double> cache;  // clamped min_leaf -> mean accuracy
  double best = -1.0;
  for (std::size_t requested : grid) {
    const std::size_t used = std::clamp<std::size_t>(requested, 1, smallest_train);
    auto it = cache.find(used);
    if (it == cache.end()) {
      double sum = 0.0;
      for (std::size_t f = 0; f < k; ++f) sum += DecisionTree::train(train_sets[f], used).accuracy(test_sets[f]);
      it = cache.emplace(used, sum / static_cast<double>(k)).first;
    }
    result.table.push_back({requested, used, it->second});
    if (it->second > best + 1e-12 || (std::abs(it->second - best) <= 1e-12 && used >= result.best_min_leaf)) {
      best = std::max(best, it->second);
      result.best_min_leaf = used;
    }
  }
  return result;
}

}  // namespace apsched
