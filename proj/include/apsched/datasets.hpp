#ifndef APSCHED_DATASETS_HPP
#define APSCHED_DATASETS_HPP

#include <vector>

#include "apsched/decision_tree.hpp"
#include "apsched/features.hpp"
#include "apsched/synthetic.hpp"

namespace apsched {

inline constexpr std::size_t kExampleDim = kNumContextFeatures + kNumTaskFeatures;

/// [xi, gamma_a - gamma_b]
std::array<double, kExampleDim> pairwise_vector(const ContextFeatures& context, const TaskFeatures& a,
                                                const TaskFeatures& b);
/// [xi, gamma]
std::array<double, kExampleDim> task_vector(const ContextFeatures& context, const TaskFeatures& task);

std::vector<std::string> pairwise_feature_names();
std::vector<std::string> task_vector_names();

/// For every scheduling observation with scheduled task i and every other
/// pending task j: [xi, g_i - g_j] labelled 1 followed by [xi, g_j - g_i]
/// labelled 0. Idle observations add nothing.
Dataset build_pairwise_dataset(const std::vector<Demonstration>& demos);

/// One positive [xi, g_i] per scheduling observation; one negative per
/// pending task at every idle observation.
Dataset build_act_dataset(const std::vector<Demonstration>& demos);

/// Pointwise baseline: every pending task of a scheduling observation,
/// labelled 1 iff it was the one scheduled.
Dataset build_pointwise_dataset(const std::vector<Demonstration>& demos);

/// Naive baseline: one row per scheduling observation holding
/// [xi, g_0, ..., g_{n-1}] with non-pending task blocks zeroed, labelled by
/// the scheduled task id.
struct MulticlassDataset {
  std::vector<std::string> feature_names;
  std::vector<double> x;
  std::vector<int> y;
  int num_classes = 0;

  std::size_t dim() const { return feature_names.size(); }
  std::size_t size() const { return y.size(); }
  /// Binary view: label 1 iff the class is `c`.
  Dataset one_vs_rest(int c) const;
};

/// Throws std::invalid_argument when the demonstrations differ in task count.
MulticlassDataset build_naive_dataset(const std::vector<Demonstration>& demos);
std::vector<double> naive_vector(const Observation& obs, int num_tasks);

}  // namespace apsched

#endif  // APSCHED_DATASETS_HPP
