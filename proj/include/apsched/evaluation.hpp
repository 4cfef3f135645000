#ifndef APSCHED_EVALUATION_HPP
#define APSCHED_EVALUATION_HPP

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "apsched/policy.hpp"

namespace apsched {

struct Metrics {
  std::optional<double> sensitivity;  // absent without scheduling observations
  std::optional<double> specificity;  // absent without idle observations
  std::size_t scheduling_observations = 0;
  std::size_t idle_observations = 0;
};

/// Ranks every pending task of each observation. A scheduling observation
/// counts as a hit when the top task is the expert's and act() agrees; an
/// idle observation counts when act() declines the top task.
Metrics evaluate(const Policy& policy, const std::vector<Demonstration>& demos);

/// Number of held-out demonstrations in an 85/15 split by demonstration:
/// max(1, round(0.15 n)).
std::size_t num_test_demos(std::size_t n);

struct AnomalyReport {
  /// (i, j, k) with i beating j, j beating k and k beating i.
  std::vector<std::array<TaskId, 3>> cycles;
  /// (i, j) where i beats j pairwise yet the cumulative ranking puts j first.
  std::vector<std::pair<TaskId, TaskId>> disagreements;

  bool empty() const { return cycles.empty() && disagreements.empty(); }
};

AnomalyReport detect_anomalies(const PolicyModel& model, const Observation& obs, std::span<const TaskId> candidates);

}  // namespace apsched

#endif  // APSCHED_EVALUATION_HPP
