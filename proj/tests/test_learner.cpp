#include <cmath>
#include <random>

#include "doctest.h"

#include "apsched/datasets.hpp"
#include "apsched/evaluation.hpp"
#include "apsched/policy.hpp"
#include "apsched/synthetic.hpp"

using namespace apsched;

namespace {

std::vector<Demonstration> make_demos(int count, double epsilon, std::uint64_t base, int tasks = 10) {
  std::vector<Demonstration> out;
  GenConfig c;
  c.num_tasks = tasks;
  for (int i = 0; i < count; ++i) {
    c.rng_seed = base + static_cast<std::uint64_t>(i);
    out.push_back(demonstrate(generate_instance(c), epsilon, base + 1000 + static_cast<std::uint64_t>(i)));
  }
  return out;
}

constexpr int kDeadlineDiff = static_cast<int>(kNumContextFeatures);

// Leaf-only tree with a constant probability.
DecisionTree constant_tree(double p) {
  TreeNode leaf;
  leaf.probability = p;
  return DecisionTree::from_nodes({leaf}, kExampleDim, 1);
}

TreeNode split(int feature, double threshold, int left, int right) {
  TreeNode n;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  return n;
}

TreeNode leaf(double p) {
  TreeNode n;
  n.probability = p;
  return n;
}

// Prefers a over b iff a's deadline is earlier.
DecisionTree edf_tree() {
  return DecisionTree::from_nodes({split(kDeadlineDiff, -0.5, 1, 2), leaf(1.0), leaf(0.0)}, kExampleDim, 1);
}

Observation obs_with_deadlines(const std::vector<double>& deadlines) {
  Observation o;
  o.context.values = {2.0, 10.0};
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    ObservedTask t;
    t.id = static_cast<TaskId>(i);
    t.features.values = {deadlines[i], 1, 0, 1, 0, 1, 0};
    o.tasks.push_back(t);
  }
  return o;
}

}  // namespace

TEST_CASE("pairwise dataset has 2(k-1) mirrored rows per scheduling observation") {
  const auto demos = make_demos(3, 0.0, 10);
  const Dataset d = build_pairwise_dataset(demos);
  std::size_t expected = 0;
  for (const auto& demo : demos) {
    for (const auto& o : demo.observations) {
      if (o.scheduled) expected += 2 * (o.tasks.size() - 1);
    }
  }
  REQUIRE(d.size() == expected);
  CHECK(d.dim() == kExampleDim);
  CHECK(d.num_positive() * 2 == d.size());
  for (std::size_t r = 0; r + 1 < d.size(); r += 2) {
    CHECK(d.y[r] == 1);
    CHECK(d.y[r + 1] == 0);
    const auto a = d.row(r);
    const auto b = d.row(r + 1);
    for (std::size_t k = 0; k < kNumContextFeatures; ++k) CHECK(a[k] == b[k]);
    for (std::size_t k = kNumContextFeatures; k < kExampleDim; ++k) CHECK(a[k] == -b[k]);
  }
}

TEST_CASE("act dataset pairs scheduled positives with idle negatives") {
  const auto demos = make_demos(3, 0.0, 20);
  const Dataset d = build_act_dataset(demos);
  std::size_t pos = 0, neg = 0;
  for (const auto& demo : demos) {
    for (const auto& o : demo.observations) {
      if (o.scheduled) {
        ++pos;
      } else {
        neg += o.tasks.size();
      }
    }
  }
  CHECK(d.num_positive() == pos);
  CHECK(d.size() == pos + neg);
  CHECK(pos == demos[0].num_scheduling() + demos[1].num_scheduling() + demos[2].num_scheduling());
}

TEST_CASE("pointwise and naive datasets") {
  const auto demos = make_demos(2, 0.0, 30);
  const Dataset pw = build_pointwise_dataset(demos);
  std::size_t rows = 0, sched = 0;
  for (const auto& demo : demos) {
    for (const auto& o : demo.observations) {
      if (!o.scheduled) continue;
      rows += o.tasks.size();
      ++sched;
    }
  }
  CHECK(pw.size() == rows);
  CHECK(pw.num_positive() == sched);

  const MulticlassDataset nv = build_naive_dataset(demos);
  CHECK(nv.size() == sched);
  CHECK(nv.num_classes == 10);
  CHECK(nv.dim() == kNumContextFeatures + 10 * kNumTaskFeatures);
  CHECK(nv.one_vs_rest(0).size() == sched);

  auto mixed = demos;
  mixed.push_back(make_demos(1, 0.0, 40, 8).front());
  CHECK_THROWS_AS(build_naive_dataset(mixed), std::invalid_argument);
}

TEST_CASE("decision tree basics") {
  Dataset sep;
  sep.feature_names = {"a", "b"};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    sep.add(std::vector<double>{a, b}, a > 0.4 ? 1 : 0);
  }
  const auto t = DecisionTree::train(sep, 1);
  CHECK(t.accuracy(sep) == 1.0);
  CHECK(t.depth() >= 1);

  const auto stump = DecisionTree::train(sep, sep.size());
  CHECK(stump.num_leaves() == 1);
  CHECK(stump.predict_proba(sep.row(0)) == doctest::Approx(static_cast<double>(sep.num_positive()) / sep.size()));

  Dataset xr;
  xr.feature_names = {"a", "b"};
  for (int i = 0; i < 400; ++i) {
    const double a = u(rng), b = u(rng);
    xr.add(std::vector<double>{a, b}, (a > 0.5) != (b > 0.5) ? 1 : 0);
  }
  const auto xt = DecisionTree::train(xr, 1);
  CHECK(xt.accuracy(xr) == 1.0);
  CHECK(xt.depth() >= 2);

  CHECK(DecisionTree::from_json(xt.to_json()).to_json() == xt.to_json());
  CHECK_THROWS(DecisionTree::from_nodes({split(5, 0.0, 1, 2), leaf(0), leaf(1)}, 2, 1));
}

TEST_CASE("cross-validation") {
  Dataset tiny;
  tiny.feature_names = {"a"};
  for (int i = 0; i < 4; ++i) tiny.add(std::vector<double>{double(i)}, i % 2);
  CHECK_THROWS_AS(cross_validate_min_leaf(tiny), std::invalid_argument);

  // Label noise rewards larger leaves.
  Dataset noisy;
  noisy.feature_names = {"a"};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const int clean = a > 0.5 ? 1 : 0;
    noisy.add(std::vector<double>{a}, u(rng) < 0.3 ? 1 - clean : clean);
  }
  const auto cv = cross_validate_min_leaf(noisy);
  CHECK(cv.best_min_leaf > 1);
  CHECK(cv.table.size() == default_min_leaf_grid().size());
  for (const auto& e : cv.table) CHECK(e.used <= 800);
}

TEST_CASE("select_task and predict_act") {
  PolicyModel m;
  m.f_priority = edf_tree();
  m.f_act = constant_tree(0.5);
  const auto o = obs_with_deadlines({7, 3, 9});
  const std::vector<TaskId> all{0, 1, 2};
  CHECK(select_task(m, o, all) == 1);
  CHECK(select_task(m, o, all, PolicyMode::Worst) == 2);
  CHECK(select_task(m, o, std::vector<TaskId>{2}) == 2);
  CHECK(predict_act(m, o, 1));
  m.f_act = constant_tree(0.49);
  CHECK_FALSE(predict_act(m, o, 1));

  const auto scores = cumulative_scores(m, o, all);
  CHECK(scores == std::vector<double>{1.0, 2.0, 0.0});
  CHECK(order_by_score(all, scores, PolicyMode::Best) == std::vector<TaskId>{1, 0, 2});
  CHECK(order_by_score(all, std::vector<double>{1, 1, 0}, PolicyMode::Worst) == std::vector<TaskId>{2, 0, 1});
}

TEST_CASE("the mock expert scores perfectly on its own clean demonstrations") {
  const auto demos = make_demos(5, 0.0, 50);
  const Metrics m = evaluate(HeuristicPolicy{}, demos);
  REQUIRE(m.sensitivity);
  CHECK(*m.sensitivity == 1.0);
  if (m.idle_observations > 0) {
    REQUIRE(m.specificity);
    CHECK(*m.specificity == 1.0);
  }

  std::vector<Demonstration> empty_obs = demos;
  for (auto& d : empty_obs) {
    std::erase_if(d.observations, [](const Observation& o) { return !o.scheduled; });
  }
  const Metrics s = evaluate(HeuristicPolicy{}, empty_obs);
  CHECK(s.idle_observations == 0);
  CHECK_FALSE(s.specificity.has_value());
  CHECK(num_test_demos(1) == 1);
  CHECK(num_test_demos(10) == 2);
  CHECK(num_test_demos(150) == 23);
}

TEST_CASE("trained policy generalizes to held-out clean demonstrations") {
  const auto train = make_demos(40, 0.0, 100);
  const auto test = make_demos(8, 0.0, 500);
  const TrainedPolicy tp = train_policy(train);
  REQUIRE(tp.priority_cv);
  REQUIRE(tp.act_cv);
  const Metrics m = evaluate(LearnedPolicy(tp.model), test);
  REQUIRE(m.sensitivity);
  CHECK(*m.sensitivity > 0.8);

  const auto pw = train_pointwise(train, tp.model.f_act);
  CHECK(evaluate(pw, test).sensitivity.value() > 0.5);
  const auto nv = train_naive(train, tp.model.f_act);
  CHECK(nv.num_tasks() == 10);

  TrainOptions fixed;
  fixed.priority_min_leaf = 3;
  fixed.act_min_leaf = 4;
  const TrainedPolicy tf = train_policy(make_demos(5, 0.0, 100), fixed);
  CHECK(tf.model.f_priority.min_leaf() == 3);
  CHECK(tf.model.f_act.min_leaf() == 4);
  CHECK_FALSE(tf.priority_cv);

  const PolicyModel back = policy_model_from_json(to_json(tp.model));
  CHECK(to_json(back) == to_json(tp.model));
  CHECK(evaluate(LearnedPolicy(back), test).sensitivity == m.sensitivity);
}

TEST_CASE("anomaly detection") {
  // Preference by deadline difference d_a - d_b: -1 wins, +2 wins, rest lose.
  PolicyModel cyc;
  cyc.f_priority = DecisionTree::from_nodes({split(kDeadlineDiff, -1.5, 1, 2), leaf(0.0), split(kDeadlineDiff, -0.5, 3, 4),
                                             leaf(1.0), split(kDeadlineDiff, 1.5, 5, 6), leaf(0.0), leaf(1.0)},
                                            kExampleDim, 1);
  cyc.f_act = constant_tree(1.0);
  const auto o = obs_with_deadlines({0, 1, 2});
  const std::vector<TaskId> all{0, 1, 2};
  const auto r = detect_anomalies(cyc, o, all);
  CHECK_FALSE(r.cycles.empty());
  CHECK(detect_anomalies(cyc, o, std::vector<TaskId>{1}).empty());

  PolicyModel edf;
  edf.f_priority = edf_tree();
  edf.f_act = constant_tree(1.0);
  CHECK(detect_anomalies(edf, obs_with_deadlines({4, 1, 3, 2}), std::vector<TaskId>{0, 1, 2, 3}).empty());
}
