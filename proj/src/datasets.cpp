#include "apsched/datasets.hpp"

#include <stdexcept>

namespace apsched {

std::array<double, kExampleDim> pairwise_vector(const ContextFeatures& context, const TaskFeatures& a,
                                                const TaskFeatures& b) {
  std::array<double, kExampleDim> v{};
  for (std::size_t k = 0; k < kNumContextFeatures; ++k) v[k] = context.values[k];
  for (std::size_t k = 0; k < kNumTaskFeatures; ++k) v[kNumContextFeatures + k] = a.values[k] - b.values[k];
  return v;
}

std::array<double, kExampleDim> task_vector(const ContextFeatures& context, const TaskFeatures& task) {
  std::array<double, kExampleDim> v{};
  for (std::size_t k = 0; k < kNumContextFeatures; ++k) v[k] = context.values[k];
  for (std::size_t k = 0; k < kNumTaskFeatures; ++k) v[kNumContextFeatures + k] = task.values[k];
  return v;
}

std::vector<std::string> pairwise_feature_names() {
  std::vector<std::string> names(context_feature_names().begin(), context_feature_names().end());
  for (const auto& n : task_feature_names()) names.push_back("diff_" + n);
  return names;
}

std::vector<std::string> task_vector_names() {
  std::vector<std::string> names(context_feature_names().begin(), context_feature_names().end());
  names.insert(names.end(), task_feature_names().begin(), task_feature_names().end());
  return names;
}

Dataset build_pairwise_dataset(const std::vector<Demonstration>& demos) {
  Dataset d;
  d.feature_names = pairwise_feature_names();
  for (const auto& demo : demos) {
    for (const auto& obs : demo.observations) {
      if (!obs.scheduled) continue;
      const ObservedTask* chosen = obs.find(obs.scheduled->task);
      if (!chosen) throw std::logic_error("scheduled task missing from its observation");
      for (const auto& other : obs.tasks) {
        if (other.id == chosen->id) continue;
        d.add(pairwise_vector(obs.context, chosen->features, other.features), 1);
        d.add(pairwise_vector(obs.context, other.features, chosen->features), 0);
      }
    }
  }
  return d;
}

Dataset build_act_dataset(const std::vector<Demonstration>& demos) {
  Dataset d;
  d.feature_names = task_vector_names();
  for (const auto& demo : demos) {
    for (const auto& obs : demo.observations) {
      if (obs.scheduled) {
        const ObservedTask* chosen = obs.find(obs.scheduled->task);
        if (!chosen) throw std::logic_error("scheduled task missing from its observation");
        d.add(task_vector(obs.context, chosen->features), 1);
      } else {
        for (const auto& t : obs.tasks) d.add(task_vector(obs.context, t.features), 0);
      }
    }
  }
  return d;
}

Dataset build_pointwise_dataset(const std::vector<Demonstration>& demos) {
  Dataset d;
  d.feature_names = task_vector_names();
  for (const auto& demo : demos) {
    for (const auto& obs : demo.observations) {
      if (!obs.scheduled) continue;
      for (const auto& t : obs.tasks) d.add(task_vector(obs.context, t.features), t.id == obs.scheduled->task ? 1 : 0);
    }
  }
  return d;
}

Dataset MulticlassDataset::one_vs_rest(int c) const {
  Dataset d;
  d.feature_names = feature_names;
  d.x = x;
  d.y.reserve(y.size());
  for (int label : y) d.y.push_back(label == c ? 1 : 0);
  return d;
}

std::vector<double> naive_vector(const Observation& obs, int num_tasks) {
  std::vector<double> v(kNumContextFeatures + kNumTaskFeatures * static_cast<std::size_t>(num_tasks), 0.0);
  for (std::size_t k = 0; k < kNumContextFeatures; ++k) v[k] = obs.context.values[k];
  for (const auto& t : obs.tasks) {
    if (t.id < 0 || t.id >= num_tasks) throw std::invalid_argument("task id outside the naive model's task range");
    const std::size_t off = kNumContextFeatures + kNumTaskFeatures * static_cast<std::size_t>(t.id);
    for (std::size_t k = 0; k < kNumTaskFeatures; ++k) v[off + k] = t.features.values[k];
  }
  return v;
}

MulticlassDataset build_naive_dataset(const std::vector<Demonstration>& demos) {
  MulticlassDataset d;
  if (demos.empty()) return d;
  const int n = static_cast<int>(demos.front().problem.num_tasks());
  for (const auto& demo : demos) {
    if (static_cast<int>(demo.problem.num_tasks()) != n) {
      throw std::invalid_argument("naive model needs a fixed task count; got " + std::to_string(n) + " and " +
                                  std::to_string(demo.problem.num_tasks()));
    }
  }
  d.num_classes = n;
  d.feature_names.assign(context_feature_names().begin(), context_feature_names().end());
  for (int i = 0; i < n; ++i) {
    for (const auto& name : task_feature_names()) d.feature_names.push_back("t" + std::to_string(i) + "_" + name);
  }
  for (const auto& demo : demos) {
    for (const auto& obs : demo.observations) {
      if (!obs.scheduled) continue;
      const auto v = naive_vector(obs, n);
      d.x.insert(d.x.end(), v.begin(), v.end());
      d.y.push_back(obs.scheduled->task);
    }
  }
  return d;
}

}  // namespace apsched
