#include "apsched/features.hpp"

#include <algorithm>
#include <cmath>

namespace apsched {

const std::array<std::string, kNumTaskFeatures>& task_feature_names() {
  static const std::array<std::string, kNumTaskFeatures> names = {
      "deadline",           "precedence_satisfied",  "resource_share_count", "resource_available",
      "travel_time_remaining", "travel_distance", "angular_difference"};
  return names;
}

const std::array<std::string, kNumContextFeatures>& context_feature_names() {
  static const std::array<std::string, kNumContextFeatures> names = {"agent_speed",
                                                                     "resource_contention_degree"};
  return names;
}

const ObservedTask* Observation::find(TaskId id) const {
  for (const auto& t : tasks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

double angle_from_origin(const Point& a, const Point& b) {
  const double na = std::hypot(a.x, a.y);
  const double nb = std::hypot(b.x, b.y);
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  const double c = std::clamp((a.x * b.x + a.y * b.y) / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

int resource_share_count(const ProblemInstance& problem, const SimState& state, const TaskSpec& task) {
  int n = 0;
  for (const auto& other : problem.tasks) {
    if (other.resource == task.resource && !state.is_finished(other.id)) ++n;
  }
  return n;
}

TaskFeatures extract_features(const ProblemInstance& problem, const SimState& state, const AgentSpec& agent,
                              const TaskSpec& task) {
  const Point& at = state.agent_location[static_cast<std::size_t>(agent.id)];
  const double dist = distance(at, task.location);
  Tick remaining = 0;
  if (!task.capable(agent.id)) {
    remaining = problem.horizon;
  } else {
    const Tick arrive = state.agent_busy_until[static_cast<std::size_t>(agent.id)] +
                        travel_ticks(dist, agent.speed);
    remaining = std::max<Tick>(0, arrive - state.time);
  }
  TaskFeatures f;
  f.values = {static_cast<double>(effective_deadline(problem, state, task)),
              is_alive_enabled(problem, state, task) ? 1.0 : 0.0,
              static_cast<double>(resource_share_count(problem, state, task) - 1),
              state.resource_free(task.resource) ? 1.0 : 0.0,
              static_cast<double>(remaining),
              dist,
              angle_from_origin(at, task.location)};
  return f;
}

ContextFeatures extract_context(const ProblemInstance& problem, const AgentSpec& agent) {
  ContextFeatures c;
  c.values = {agent.speed, static_cast<double>(problem.resource_contention())};
  return c;
}

Observation observe(const ProblemInstance& problem, const SimState& state, AgentId agent_id) {
  const auto& agent = problem.agent(agent_id);
  Observation obs;
  obs.tick = state.time;
  obs.agent = agent_id;
  obs.context = extract_context(problem, agent);
  for (TaskId id : pending_tasks(state)) {
    obs.tasks.push_back({id, extract_features(problem, state, agent, problem.task(id))});
  }
  return obs;
}

}  // namespace apsched
