#include "apsched/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace apsched {

Metrics evaluate(const Policy& policy, const std::vector<Demonstration>& demos) {
  Metrics m;
  std::size_t hits = 0;
  std::size_t rejections = 0;
  std::vector<TaskId> ids;
  for (const auto& demo : demos) {
    for (const auto& obs : demo.observations) {
      if (obs.tasks.empty()) continue;
      ids.clear();
      for (const auto& t : obs.tasks) ids.push_back(t.id);
      const TaskId top = policy.rank(obs, ids, PolicyMode::Best).front();
      const bool acts = policy.act(obs, top);
      if (obs.scheduled) {
        ++m.scheduling_observations;
        hits += static_cast<std::size_t>(acts && top == obs.scheduled->task);
      } else {
        ++m.idle_observations;
        rejections += static_cast<std::size_t>(!acts);
      }
    }
  }
  if (m.scheduling_observations > 0) {
    m.sensitivity = static_cast<double>(hits) / static_cast<double>(m.scheduling_observations);
  }
  if (m.idle_observations > 0) {
    m.specificity = static_cast<double>(rejections) / static_cast<double>(m.idle_observations);
  }
  return m;
}

std::size_t num_test_demos(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(n))));
}

AnomalyReport detect_anomalies(const PolicyModel& model, const Observation& obs, std::span<const TaskId> candidates) {
  AnomalyReport report;
  const std::size_t n = candidates.size();
  if (n < 2) return report;
  std::vector<const TaskFeatures*> f;
  for (TaskId id : candidates) {
    const ObservedTask* t = obs.find(id);
    if (!t) throw std::invalid_argument("candidate missing from observation");
    f.push_back(&t->features);
  }
  std::vector<std::vector<char>> beats(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) beats[i][j] = pairwise_preference(model, obs.context, *f[i], *f[j]) > 0.5;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (beats[i][j] && beats[j][k] && beats[k][i]) {
          report.cycles.push_back({candidates[i], candidates[j], candidates[k]});
        }
        if (beats[i][k] && beats[k][j] && beats[j][i]) {
          report.cycles.push_back({candidates[i], candidates[k], candidates[j]});
        }
      }
    }
  }
  const auto order = order_by_score(candidates, cumulative_scores(model, obs, candidates), PolicyMode::Best);
  std::vector<std::size_t> position(n);
  for (std::size_t p = 0; p < n; ++p) {
    position[static_cast<std::size_t>(std::find(candidates.begin(), candidates.end(), order[p]) - candidates.begin())] = p;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && beats[i][j] && position[j] < position[i]) report.disagreements.push_back({candidates[i], candidates[j]});
    }
  }
  return report;
}

}  // namespace apsched
