#ifndef APSCHED_POLICY_HPP
#define APSCHED_POLICY_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "apsched/datasets.hpp"
#include "apsched/decision_tree.hpp"
#include "apsched/features.hpp"
#include "apsched/rules.hpp"
#include "apsched/synthetic.hpp"

namespace apsched {

/// Best follows the learned preference; Worst inverts it (argmin).
enum class PolicyMode { Best, Worst };

std::string to_string(PolicyMode mode);
PolicyMode policy_mode_from_string(const std::string& s);

/// Anything that can order candidate tasks and decide whether to act.
class Policy {
 public:
  virtual ~Policy() = default;
  /// Candidates ordered most preferred first. `candidates` must be a subset
  /// of the observation's tasks.
  virtual std::vector<TaskId> rank(const Observation& obs, std::span<const TaskId> candidates,
                                   PolicyMode mode = PolicyMode::Best) const = 0;
  /// True means "schedule `task` now"; false means stay idle.
  virtual bool act(const Observation& obs, TaskId task) const = 0;
  virtual std::string name() const = 0;
};

/// Orders candidates by score (descending for Best, ascending for Worst),
/// lowest id first among equal scores.
std::vector<TaskId> order_by_score(std::span<const TaskId> candidates, std::span<const double> scores,
                                   PolicyMode mode);

struct PolicyModel {
  DecisionTree f_priority;
  DecisionTree f_act;
  std::string schema = kFeatureSchema;
};

nlohmann::json to_json(const PolicyModel& model);
PolicyModel policy_model_from_json(const nlohmann::json& j);

/// f_priority([xi, g_a - g_b]); the probability that a is preferred to b.
double pairwise_preference(const PolicyModel& model, const ContextFeatures& context, const TaskFeatures& a,
                           const TaskFeatures& b);

/// Sum over all candidates j (self included) of f_priority([xi, g_i - g_j]).
std::vector<double> cumulative_scores(const PolicyModel& model, const Observation& obs,
                                      std::span<const TaskId> candidates);

TaskId select_task(const PolicyModel& model, const Observation& obs, std::span<const TaskId> candidates,
                   PolicyMode mode = PolicyMode::Best);
TaskId select_task(const PolicyModel& model, const ProblemInstance& problem, const SimState& state, AgentId agent,
                   std::span<const TaskId> candidates, PolicyMode mode = PolicyMode::Best);

/// f_act at the 0.5 threshold; exactly 0.5 schedules.
bool predict_act(const PolicyModel& model, const Observation& obs, TaskId task);
bool predict_act(const PolicyModel& model, const ProblemInstance& problem, const SimState& state, AgentId agent,
                 TaskId task);

class LearnedPolicy : public Policy {
 public:
  explicit LearnedPolicy(PolicyModel model) : model_(std::move(model)) {}
  std::vector<TaskId> rank(const Observation& obs, std::span<const TaskId> candidates,
                           PolicyMode mode = PolicyMode::Best) const override;
  bool act(const Observation& obs, TaskId task) const override { return predict_act(model_, obs, task); }
  std::string name() const override { return "pairwise"; }
  const PolicyModel& model() const { return model_; }

 private:
  PolicyModel model_;
};

/// The mock expert seen through observed features: startable tasks first,
/// each group ordered by the preference of the rule the context selects.
class HeuristicPolicy : public Policy {
 public:
  explicit HeuristicPolicy(RuleParams params = {}) : params_(params) {}
  std::vector<TaskId> rank(const Observation& obs, std::span<const TaskId> candidates,
                           PolicyMode mode = PolicyMode::Best) const override;
  bool act(const Observation& obs, TaskId task) const override;
  std::string name() const override { return "heuristic"; }

 private:
  RuleParams params_;
};

/// Pointwise baseline: rank by P(scheduled | xi, g_i); shares f_act.
class PointwisePolicy : public Policy {
 public:
  PointwisePolicy(DecisionTree scorer, DecisionTree f_act) : scorer_(std::move(scorer)), f_act_(std::move(f_act)) {}
  std::vector<TaskId> rank(const Observation& obs, std::span<const TaskId> candidates,
                           PolicyMode mode = PolicyMode::Best) const override;
  bool act(const Observation& obs, TaskId task) const override;
  std::string name() const override { return "pointwise"; }

 private:
  DecisionTree scorer_;
  DecisionTree f_act_;
};

/// Naive baseline: one-vs-rest trees over the concatenated task features;
/// rank by class probability. Only valid for the task count it was trained on.
class NaivePolicy : public Policy {
 public:
  NaivePolicy(std::vector<DecisionTree> per_class, DecisionTree f_act)
      : per_class_(std::move(per_class)), f_act_(std::move(f_act)) {}
  std::vector<TaskId> rank(const Observation& obs, std::span<const TaskId> candidates,
                           PolicyMode mode = PolicyMode::Best) const override;
  bool act(const Observation& obs, TaskId task) const override;
  std::string name() const override { return "naive"; }
  int num_tasks() const { return static_cast<int>(per_class_.size()); }

 private:
  std::vector<DecisionTree> per_class_;
  DecisionTree f_act_;
};

/// Unset min_leaf values are tuned by cross-validation on the training data.
struct TrainOptions {
  std::optional<std::size_t> priority_min_leaf;
  std::optional<std::size_t> act_min_leaf;
  std::vector<std::size_t> grid = default_min_leaf_grid();
};

struct TrainedPolicy {
  PolicyModel model;
  std::optional<CvResult> priority_cv;
  std::optional<CvResult> act_cv;
};

/// Trains one tree with a fixed or cross-validated min_leaf.
DecisionTree fit_tree(const Dataset& data, std::optional<std::size_t> min_leaf, const std::vector<std::size_t>& grid,
                      std::optional<CvResult>* cv_out = nullptr);

TrainedPolicy train_policy(const std::vector<Demonstration>& demos, const TrainOptions& options = {});
PointwisePolicy train_pointwise(const std::vector<Demonstration>& demos, const DecisionTree& f_act,
                                const TrainOptions& options = {});
/// Throws std::invalid_argument when task counts differ across demos.
NaivePolicy train_naive(const std::vector<Demonstration>& demos, const DecisionTree& f_act,
                        const TrainOptions& options = {});

}  // namespace apsched

#endif  // APSCHED_POLICY_HPP
