#ifndef APSCHED_SIM_STATE_HPP
#define APSCHED_SIM_STATE_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "apsched/problem.hpp"

namespace apsched {

class InfeasibleAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StartRecord {
  AgentId agent = 0;
  Tick start = 0;
  Tick finish = 0;

  friend bool operator==(const StartRecord&, const StartRecord&) = default;
};

/// Tick-level simulation state. Vectors are indexed by task / agent /
/// resource id; an empty optional means "not started" or "not finished".
struct SimState {
  Tick time = 0;
  std::vector<std::optional<Tick>> finished;
  std::vector<std::optional<StartRecord>> started;
  std::vector<Point> agent_location;
  std::vector<Tick> agent_busy_until;
  std::vector<Tick> resource_busy_until;

  static SimState initial(const ProblemInstance& problem);

  bool is_started(TaskId task) const { return started[static_cast<std::size_t>(task)].has_value(); }
  bool is_finished(TaskId task) const { return finished[static_cast<std::size_t>(task)].has_value(); }
  bool agent_idle(AgentId agent) const { return agent_busy_until[static_cast<std::size_t>(agent)] <= time; }
  bool resource_free(ResourceId r) const { return resource_busy_until[static_cast<std::size_t>(r)] <= time; }
  bool all_finished() const;
  bool all_started() const;

  /// Moves the clock forward and marks tasks whose finish tick has passed.
  void advance_to(Tick t);

  friend bool operator==(const SimState&, const SimState&) = default;
};

/// Every wait predecessor finished and `state.time >= finish + W`.
bool is_alive_enabled(const ProblemInstance& problem, const SimState& state, const TaskSpec& task);

/// Ticks the agent needs to move from its current location to the task.
Tick travel_time(const SimState& state, const AgentSpec& agent, const TaskSpec& task);

bool agent_can_reach(const SimState& state, const AgentSpec& agent, const TaskSpec& task);

/// Deadline in force at `state`: the absolute deadline, relative deadlines
/// whose anchor already started, and the horizon, whichever is earliest.
Tick effective_deadline(const ProblemInstance& problem, const SimState& state, const TaskSpec& task);

/// True iff `agent` could start `task` at `state.time`.
bool can_start(const ProblemInstance& problem, const SimState& state, TaskId task, AgentId agent);

/// Tasks the agent could start now, ascending id.
std::vector<TaskId> feasible_candidates(const ProblemInstance& problem, const SimState& state,
                                        AgentId agent);

/// Tasks not yet started, ascending id.
std::vector<TaskId> pending_tasks(const SimState& state);

/// Starts `task` on `agent` at `state.time`. Throws InfeasibleAction naming the
/// first violated precondition.
SimState apply_action(const ProblemInstance& problem, const SimState& state, TaskId task,
                      AgentId agent);

/// Schedule induced by the started tasks of `state`.
Schedule induced_schedule(const ProblemInstance& problem, const SimState& state);

}  // namespace apsched

#endif  // APSCHED_SIM_STATE_HPP
