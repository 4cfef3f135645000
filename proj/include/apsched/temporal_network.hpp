#ifndef APSCHED_TEMPORAL_NETWORK_HPP
#define APSCHED_TEMPORAL_NETWORK_HPP

#include <optional>
#include <vector>

#include "apsched/problem.hpp"

namespace apsched {

/// Difference constraints s_to >= s_from + weight over task start times plus
/// a time origin fixed at 0. Every start is also >= 0.
class TemporalNetwork {
 public:
  explicit TemporalNetwork(std::size_t num_tasks) : out_(num_tasks + 1) {}

  void require_after(TaskId before, TaskId after, Tick weight);
  void release(TaskId task, Tick earliest);
  std::size_t num_tasks() const { return out_.size() - 1; }

  /// Componentwise smallest solution with every start <= `cap`, or nullopt on
  /// a positive cycle or when the cap is exceeded. `init` (a lower bound on
  /// the answer, e.g. the solution of a weaker network) speeds things up.
  std::optional<std::vector<Tick>> least_solution(Tick cap, const std::vector<Tick>* init = nullptr) const;

 private:
  struct Arc {
    std::size_t to;
    Tick weight;
  };
  std::vector<std::vector<Arc>> out_;  // node 0 is the origin, task i is node i + 1
};

}  // namespace apsched

#endif  // APSCHED_TEMPORAL_NETWORK_HPP
