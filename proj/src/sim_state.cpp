#include "apsched/sim_state.hpp"

#include <algorithm>
#include <string>

namespace apsched {

SimState SimState::initial(const ProblemInstance& problem) {
  SimState s;
  s.finished.assign(problem.num_tasks(), std::nullopt);
  s.started.assign(problem.num_tasks(), std::nullopt);
  for (const auto& a : problem.agents) s.agent_location.push_back(a.start_location);
  s.agent_busy_until.assign(problem.num_agents(), 0);
  s.resource_busy_until.assign(problem.resources.size(), 0);
  return s;
}

bool SimState::all_finished() const {
  return std::all_of(finished.begin(), finished.end(), [](const auto& f) { return f.has_value(); });
}

bool SimState::all_started() const {
  return std::all_of(started.begin(), started.end(), [](const auto& s) { return s.has_value(); });
}

void SimState::advance_to(Tick t) {
  time = t;
  for (std::size_t i = 0; i < started.size(); ++i) {
    if (started[i] && !finished[i] && started[i]->finish <= time) finished[i] = started[i]->finish;
  }
}

bool is_alive_enabled(const ProblemInstance& problem, const SimState& state, const TaskSpec& task) {
  for (const auto& w : task.waits) {
    problem.task(w.predecessor);  // throws on unknown id
    const auto& f = state.finished[static_cast<std::size_t>(w.predecessor)];
    if (!f || state.time < *f + w.ticks) return false;
  }
  return true;
}

Tick travel_time(const SimState& state, const AgentSpec& agent, const TaskSpec& task) {
  return travel_ticks(distance(state.agent_location[static_cast<std::size_t>(agent.id)], task.location),
                      agent.speed);
}

bool agent_can_reach(const SimState& state, const AgentSpec& agent, const TaskSpec& task) {
  return state.time >= state.agent_busy_until[static_cast<std::size_t>(agent.id)] +
                           travel_time(state, agent, task);
}

Tick effective_deadline(const ProblemInstance& problem, const SimState& state, const TaskSpec& task) {
  Tick d = problem.horizon;
  if (task.abs_deadline) d = std::min(d, *task.abs_deadline);
  for (const auto& r : task.rel_deadlines) {
    const auto& s = state.started[static_cast<std::size_t>(r.anchor)];
    if (s) d = std::min(d, s->start + r.bound);
  }
  return d;
}

namespace {

// Empty string when the action is admissible, otherwise the violated condition.
std::string violated_precondition(const ProblemInstance& problem, const SimState& state, TaskId task_id,
                                  AgentId agent_id) {
  const auto& task = problem.task(task_id);
  const auto& agent = problem.agent(agent_id);
  if (state.is_started(task_id)) return "task already started";
  if (!task.capable(agent_id)) return "agent incapable of task";
  if (!is_alive_enabled(problem, state, task)) return "task not alive and enabled";
  if (!state.agent_idle(agent_id)) return "agent busy";
  if (!agent_can_reach(state, agent, task)) return "agent cannot reach task";
  if (!state.resource_free(task.resource)) return "resource busy";
  return {};
}

}  // namespace

bool can_start(const ProblemInstance& problem, const SimState& state, TaskId task, AgentId agent) {
  return violated_precondition(problem, state, task, agent).empty();
}

std::vector<TaskId> feasible_candidates(const ProblemInstance& problem, const SimState& state,
                                        AgentId agent) {
  std::vector<TaskId> out;
  for (const auto& t : problem.tasks) {
    if (can_start(problem, state, t.id, agent)) out.push_back(t.id);
  }
  return out;
}

std::vector<TaskId> pending_tasks(const SimState& state) {
  std::vector<TaskId> out;
  for (std::size_t i = 0; i < state.started.size(); ++i) {
    if (!state.started[i]) out.push_back(static_cast<TaskId>(i));
  }
  return out;
}

SimState apply_action(const ProblemInstance& problem, const SimState& state, TaskId task_id,
                      AgentId agent_id) {
  const std::string why = violated_precondition(problem, state, task_id, agent_id);
  if (!why.empty()) {
    throw InfeasibleAction("cannot start task " + std::to_string(task_id) + " on agent " +
                           std::to_string(agent_id) + " at t=" + std::to_string(state.time) + ": " +
                           why);
  }
  const auto& task = problem.task(task_id);
  const Tick finish = state.time + *task.duration_for(agent_id);
  SimState next = state;
  next.started[static_cast<std::size_t>(task_id)] = StartRecord{agent_id, state.time, finish};
  next.agent_location[static_cast<std::size_t>(agent_id)] = task.location;
  next.agent_busy_until[static_cast<std::size_t>(agent_id)] = finish;
  next.resource_busy_until[static_cast<std::size_t>(task.resource)] = finish;
  return next;
}

Schedule induced_schedule(const ProblemInstance& problem, const SimState& state) {
  Schedule s;
  for (std::size_t i = 0; i < state.started.size(); ++i) {
    if (const auto& r = state.started[i]) {
      s.entries.push_back({static_cast<TaskId>(i), r->agent, r->start, r->finish});
    }
  }
  finalize(s, problem);
  return s;
}

}  // namespace apsched
