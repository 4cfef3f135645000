#include "apsched/policy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace apsched {

std::string to_string(PolicyMode mode) { return mode == PolicyMode::Best ? "best" : "worst"; }

PolicyMode policy_mode_from_string(const std::string& s) {
  if (s == "best") return PolicyMode::Best;
  if (s == "worst") return PolicyMode::Worst;
  throw std::invalid_argument("unknown policy mode: " + s);
}

std::vector<TaskId> order_by_score(std::span<const TaskId> candidates, std::span<const double> scores,
                                   PolicyMode mode) {
  if (candidates.size() != scores.size()) throw std::invalid_argument("one score per candidate required");
  std::vector<std::size_t> idx(candidates.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return mode == PolicyMode::Best ? scores[a] > scores[b] : scores[a] < scores[b];
    return candidates[a] < candidates[b];
  });
  std::vector<TaskId> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(candidates[i]);
  return out;
}

nlohmann::json to_json(const PolicyModel& model) {
  return {{"schema_version", model.schema},
          {"task_features", task_feature_names()},
          {"context_features", context_feature_names()},
          {"f_priority", model.f_priority.to_json()},
          {"f_act", model.f_act.to_json()}};
}

PolicyModel policy_model_from_json(const nlohmann::json& j) {
  PolicyModel m;
  m.schema = j.at("schema_version").get<std::string>();
  if (m.schema != kFeatureSchema) throw std::invalid_argument("unsupported policy schema: " + m.schema);
  m.f_priority = DecisionTree::from_json(j.at("f_priority"));
  m.f_act = DecisionTree::from_json(j.at("f_act"));
  if (m.f_priority.dim() != kExampleDim || m.f_act.dim() != kExampleDim) {
    throw std::invalid_argument("policy trees do not match the feature layout");
  }
  return m;
}

namespace {

const ObservedTask& observed(const Observation& obs, TaskId id) {
  const ObservedTask* t = obs.find(id);
  if (!t) throw std::invalid_argument("task " + std::to_string(id) + " is not part of the observation");
  return *t;
}

void require_nonempty(std::span<const TaskId> candidates) {
  if (candidates.empty()) throw std::invalid_argument("empty candidate set");
}

}  // namespace

double pairwise_preference(const PolicyModel& model, const ContextFeatures& context, const TaskFeatures& a,
                           const TaskFeatures& b) {
  return model.f_priority.predict_proba(pairwise_vector(context, a, b));
}

std::vector<double> cumulative_scores(const PolicyModel& model, const Observation& obs,
                                      std::span<const TaskId> candidates) {
  std::vector<const TaskFeatures*> feats;
  feats.reserve(candidates.size());
  for (TaskId id : candidates) feats.push_back(&observed(obs, id).features);
  // Sum in ascending id order so the scores do not depend on candidate order.
  std::vector<std::size_t> by_id(candidates.size());
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return candidates[a] < candidates[b]; });
  std::vector<double> scores(candidates.size(), 0.0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j : by_id) {
      scores[i] += pairwise_preference(model, obs.context, *feats[i], *feats[j]);
    }
  }
  return scores;
}

TaskId select_task(const PolicyModel& model, const Observation& obs, std::span<const TaskId> candidates,
                   PolicyMode mode) {
  require_nonempty(candidates);
  const auto scores = cumulative_scores(model, obs, candidates);
  return order_by_score(candidates, scores, mode).front();
}

TaskId select_task(const PolicyModel& model, const ProblemInstance& problem, const SimState& state, AgentId agent,
                   std::span<const TaskId> candidates, PolicyMode mode) {
  return select_task(model, observe(problem, state, agent), candidates, mode);
}

bool predict_act(const PolicyModel& model, const Observation& obs, TaskId task) {
  return model.f_act.predict_proba(task_vector(obs.context, observed(obs, task).features)) >= 0.5;
}

bool predict_act(const PolicyModel& model, const ProblemInstance& problem, const SimState& state, AgentId agent,
                 TaskId task) {
  const auto& a = problem.agent(agent);
  return model.f_act.predict_proba(task_vector(extract_context(problem, a),
                                               extract_features(problem, state, a, problem.task(task)))) >= 0.5;
}

std::vector<TaskId> LearnedPolicy::rank(const Observation& obs, std::span<const TaskId> candidates,
                                        PolicyMode mode) const {
  const auto scores = cumulative_scores(model_, obs, candidates);
  return order_by_score(candidates, scores, mode);
}

std::vector<TaskId> HeuristicPolicy::rank(const Observation& obs, std::span<const TaskId> candidates,
                                          PolicyMode mode) const {
  const RuleKind rule = select_rule(obs.context, params_);
  struct Key {
    TaskId id;
    bool startable;
    double pref;
  };
  std::vector<Key> keys;
  for (TaskId id : candidates) {
    const auto& f = observed(obs, id).features;
    keys.push_back({id, f.startable(), rule_preference(rule, params_, f)});
  }
  const bool best = mode == PolicyMode::Best;
  std::sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
    if (a.startable != b.startable) return best ? a.startable : b.startable;
    if (a.pref != b.pref) return best ? a.pref > b.pref : a.pref < b.pref;
    return a.id < b.id;
  });
  std::vector<TaskId> out;
  for (const auto& k : keys) out.push_back(k.id);
  return out;
}

bool HeuristicPolicy::act(const Observation& obs, TaskId task) const { return observed(obs, task).features.startable(); }

std::vector<TaskId> PointwisePolicy::rank(const Observation& obs, std::span<const TaskId> candidates,
                                          PolicyMode mode) const {
  std::vector<double> scores;
  for (TaskId id : candidates) scores.push_back(scorer_.predict_proba(task_vector(obs.context, observed(obs, id).features)));
  return order_by_score(candidates, scores, mode);
}

bool PointwisePolicy::act(const Observation& obs, TaskId task) const {
  return f_act_.predict_proba(task_vector(obs.context, observed(obs, task).features)) >= 0.5;
}

std::vector<TaskId> NaivePolicy::rank(const Observation& obs, std::span<const TaskId> candidates,
                                      PolicyMode mode) const {
  const auto v = naive_vector(obs, num_tasks());
  std::vector<double> scores;
  for (TaskId id : candidates) {
    if (id < 0 || id >= num_tasks()) throw std::invalid_argument("naive model cannot score task " + std::to_string(id));
    scores.push_back(per_class_[static_cast<std::size_t>(id)].predict_proba(v));
  }
  return order_by_score(candidates, scores, mode);
}

bool NaivePolicy::act(const Observation& obs, TaskId task) const {
  return f_act_.predict_proba(task_vector(obs.context, observed(obs, task).features)) >= 0.5;
}

DecisionTree fit_tree(const Dataset& data, std::optional<std::size_t> min_leaf, const std::vector<std::size_t>& grid,
                      std::optional<CvResult>* cv_out) {
  if (data.size() == 0) throw std::invalid_argument("no training examples");
  std::size_t ml = 1;
  if (min_leaf) {
    ml = *min_leaf;
  } else if (data.size() >= 5) {
    CvResult cv = cross_validate_min_leaf(data, grid);
    ml = cv.best_min_leaf;
    if (cv_out) *cv_out = std::move(cv);
  }
  return DecisionTree::train(data, ml);
}

TrainedPolicy train_policy(const std::vector<Demonstration>& demos, const TrainOptions& options) {
  TrainedPolicy out;
  const Dataset pairs = build_pairwise_dataset(demos);
  const Dataset acts = build_act_dataset(demos);
  if (pairs.size() == 0) throw std::invalid_argument("demonstrations contain no pairwise examples");
  out.model.f_priority = fit_tree(pairs, options.priority_min_leaf, options.grid, &out.priority_cv);
  out.model.f_act = fit_tree(acts, options.act_min_leaf, options.grid, &out.act_cv);
  return out;
}

PointwisePolicy train_pointwise(const std::vector<Demonstration>& demos, const DecisionTree& f_act,
                                const TrainOptions& options) {
  const Dataset data = build_pointwise_dataset(demos);
  return PointwisePolicy(fit_tree(data, options.priority_min_leaf, options.grid), f_act);
}

NaivePolicy train_naive(const std::vector<Demonstration>& demos, const DecisionTree& f_act,
                        const TrainOptions& options) {
  const MulticlassDataset data = build_naive_dataset(demos);
  if (data.size() == 0) throw std::invalid_argument("demonstrations contain no scheduling observations");
  std::vector<DecisionTree> trees;
  for (int c = 0; c < data.num_classes; ++c) {
    trees.push_back(fit_tree(data.one_vs_rest(c), options.priority_min_leaf, options.grid));
  }
  return NaivePolicy(std::move(trees), f_act);
}

}  // namespace apsched
