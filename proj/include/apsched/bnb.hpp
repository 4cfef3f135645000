#ifndef APSCHED_BNB_HPP
#define APSCHED_BNB_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "apsched/model.hpp"
#include "apsched/problem.hpp"

namespace apsched {

/// Partial solution: some tasks assigned to agents, some task pairs ordered.
struct SearchNode {
  std::vector<AgentId> agent;                    // -1 while unassigned
  std::vector<std::pair<TaskId, TaskId>> orders;  // (first, second)
  std::size_t assigned = 0;                      // prefix of the static assignment order
  std::vector<Tick> hint;                        // parent's earliest starts
};

struct NodeEvaluation {
  bool feasible = false;
  std::vector<Tick> start;     // least start times under the node's decisions
  std::vector<Tick> duration;  // assigned duration, or the fastest one
  Tick bound = 0;
  bool leaf = false;  // least starts form a feasible complete schedule
  Tick value = 0;     // makespan at a leaf
  std::optional<std::pair<TaskId, TaskId>> conflict;
};

/// Branching structure searched by branch_and_bound. First every task is
/// assigned (fewest capable agents, then earliest deadline, then id), then
/// overlapping same-agent or same-resource pairs are ordered, earliest
/// overlap first.
class SearchSpace {
 public:
  explicit SearchSpace(const ProblemInstance& problem);

  SearchNode root() const;
  NodeEvaluation evaluate(const SearchNode& node) const;
  /// Children in generation order; infeasible ones are included.
  std::vector<SearchNode> branch(const SearchNode& node, const NodeEvaluation& eval) const;
  Schedule schedule_of(const SearchNode& node, const NodeEvaluation& eval) const;
  const std::vector<TaskId>& assignment_order() const { return order_; }
  const ProblemInstance& problem() const { return problem_; }

 private:
  Tick tt(TaskId from, TaskId to, AgentId a) const {
    return task_travel_[static_cast<std::size_t>(a)][static_cast<std::size_t>(from) * n_ + static_cast<std::size_t>(to)];
  }
  Tick st(AgentId a, TaskId to) const {
    return start_travel_[static_cast<std::size_t>(a)][static_cast<std::size_t>(to)];
  }
  Tick bound_of(const SearchNode& node, const NodeEvaluation& eval) const;

  ProblemInstance problem_;
  std::size_t n_ = 0;
  std::vector<TaskId> order_;
  std::vector<std::vector<Tick>> task_travel_;   // [agent][from * n + to]
  std::vector<std::vector<Tick>> start_travel_;  // [agent][task]
};

struct BnBOptions {
  double gap_threshold = 1e-3;
  std::size_t node_limit = 2'000'000;
  double time_limit = 120.0;  // seconds
};

struct IncumbentUpdate {
  std::size_t node = 0;
  Tick objective = 0;
  double seconds = 0.0;
};

struct BnBResult {
  Schedule best_schedule;
  Tick objective = 0;
  Tick lower_bound = 0;
  double gap = 0.0;
  std::size_t nodes_explored = 0;
  double wall_time = 0.0;
  bool seeded = false;
  std::optional<Tick> seed_objective;
  std::vector<IncumbentUpdate> incumbent_trace;  // improving solutions found by search
  std::vector<std::string> warnings;
  /// "optimal", "node_limit", "time_limit" or "infeasible".
  std::string status;

  bool solved() const { return status == "optimal"; }
  bool has_solution() const { return best_schedule.complete; }
  /// First search node whose incumbent beats `target`.
  std::optional<IncumbentUpdate> first_better_than(Tick target) const;
};

nlohmann::json to_json(const BnBResult& r);

/// Depth-first search with children taken best bound first. A node is pruned
/// when its bound reaches ceil(incumbent * (1 - gap_threshold)), so a finished
/// search has gap <= gap_threshold. A seed that is incomplete or fails
/// validation is dropped with a warning and the run proceeds unseeded.
BnBResult branch_and_bound(const SchedModel& model, const std::optional<Schedule>& seed = std::nullopt,
                           const BnBOptions& options = {});

}  // namespace apsched

#endif  // APSCHED_BNB_HPP
