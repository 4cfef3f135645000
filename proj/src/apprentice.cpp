#include "apsched/apprentice.hpp"

#include <algorithm>
#include <limits>

#include "apsched/features.hpp"

namespace apsched {

namespace {

// Lower bound on when `task` could start given what has already started.
Tick earliest_release(const ProblemInstance& problem, const SimState& s, const TaskSpec& task) {
  Tick release = s.time;
  for (const auto& w : task.waits) {
    const auto& pred = problem.task(w.predecessor);
    const auto& rec = s.started[static_cast<std::size_t>(pred.id)];
    const Tick pred_finish = rec ? rec->finish : s.time + pred.min_duration();
    release = std::max(release, pred_finish + w.ticks);
  }
  return std::max(release, s.resource_busy_until[static_cast<std::size_t>(task.resource)]);
}

}  // namespace

bool schedulability_test(const ProblemInstance& problem, const SimState& state, TaskId task, AgentId agent) {
  const SimState next = apply_action(problem, state, task, agent);
  for (const auto& t : problem.tasks) {
    if (next.is_finished(t.id)) continue;
    const Tick deadline = effective_deadline(problem, next, t);
    if (const auto& rec = next.started[static_cast<std::size_t>(t.id)]) {
      if (rec->finish > deadline) return false;
      continue;
    }
    const Tick release = earliest_release(problem, next, t);
    bool possible = false;
    for (const auto& d : t.durations) {
      const auto& a = problem.agent(d.agent);
      const Tick avail = std::max(next.time, next.agent_busy_until[static_cast<std::size_t>(a.id)]);
      const Tick arrive = avail + travel_time(next, a, t);
      if (std::max(arrive, release) + d.ticks <= deadline) {
        possible = true;
        break;
      }
    }
    if (!possible) return false;
  }
  return true;
}

Schedule construct_schedule(const ProblemInstance& problem, const Policy& policy, const SchedulerConfig& config) {
  if (config.fallback_depth && *config.fallback_depth < 1) throw std::invalid_argument("fallback_depth must be >= 1");
  const std::size_t depth = config.fallback_depth.value_or(std::numeric_limits<std::size_t>::max());
  SimState state = SimState::initial(problem);
  for (Tick t = 0; t <= problem.horizon; ++t) {
    state.advance_to(t);
    if (state.all_finished()) break;
    for (const auto& agent : problem.agents) {
      if (!state.agent_idle(agent.id) || state.all_started()) continue;
      const auto candidates = feasible_candidates(problem, state, agent.id);
      if (candidates.empty()) continue;
      const Observation obs = observe(problem, state, agent.id);
      const auto ranked = policy.rank(obs, candidates, config.mode);
      const std::size_t tries = std::min(depth, ranked.size());
      for (std::size_t k = 0; k < tries; ++k) {
        const TaskId choice = ranked[k];
        if (!policy.act(obs, choice)) continue;
        if (config.use_schedulability_test && !schedulability_test(problem, state, choice, agent.id)) continue;
        state = apply_action(problem, state, choice, agent.id);
        break;
      }
    }
  }
  return induced_schedule(problem, state);
}

}  // namespace apsched
