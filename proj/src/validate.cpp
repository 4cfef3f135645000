#include "apsched/validate.hpp"

#include <algorithm>
#include <map>

namespace apsched {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnknownTask: return "unknown_task";
    case ViolationKind::UnknownAgent: return "unknown_agent";
    case ViolationKind::DuplicateTask: return "duplicate_task";
    case ViolationKind::IncapableAgent: return "incapable_agent";
    case ViolationKind::DurationMismatch: return "duration_mismatch";
    case ViolationKind::NegativeStart: return "negative_start";
    case ViolationKind::Horizon: return "horizon";
    case ViolationKind::Wait: return "wait";
    case ViolationKind::AbsoluteDeadline: return "absolute_deadline";
    case ViolationKind::RelativeDeadline: return "relative_deadline";
    case ViolationKind::ResourceOverlap: return "resource_overlap";
    case ViolationKind::AgentOverlap: return "agent_overlap";
    case ViolationKind::Reachability: return "reachability";
    case ViolationKind::Coverage: return "coverage";
    case ViolationKind::Objective: return "objective";
  }
  return "unknown";
}

std::size_t FeasibilityReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [kind](const Violation& v) { return v.kind == kind; }));
}

namespace {

bool overlaps(const ScheduleEntry& a, const ScheduleEntry& b) {
  return a.start < b.finish && b.start < a.finish;
}

}  // namespace

FeasibilityReport validate_schedule(const ProblemInstance& problem, const Schedule& schedule) {
  FeasibilityReport report;
  auto add = [&](ViolationKind kind, std::vector<TaskId> tasks, std::string detail) {
    report.violations.push_back({kind, std::move(tasks), std::move(detail)});
  };

  // Entries that survive the structural checks, keyed by task id.
  std::map<TaskId, ScheduleEntry> placed;
  for (const auto& e : schedule.entries) {
    if (e.task < 0 || static_cast<std::size_t>(e.task) >= problem.num_tasks()) {
      add(ViolationKind::UnknownTask, {e.task}, "entry names an unknown task");
      continue;
    }
    if (e.agent < 0 || static_cast<std::size_t>(e.agent) >= problem.num_agents()) {
      add(ViolationKind::UnknownAgent, {e.task}, "entry names an unknown agent");
      continue;
    }
    if (placed.count(e.task)) {
      add(ViolationKind::DuplicateTask, {e.task}, "task scheduled more than once");
      continue;
    }
    const auto& task = problem.tasks[static_cast<std::size_t>(e.task)];
    const auto dur = task.duration_for(e.agent);
    if (!dur) {
      add(ViolationKind::IncapableAgent, {e.task}, "agent cannot perform task");
      continue;
    }
    if (e.finish - e.start != *dur) {
      add(ViolationKind::DurationMismatch, {e.task}, "finish - start differs from the agent's duration");
    }
    if (e.start < 0) add(ViolationKind::NegativeStart, {e.task}, "start before tick 0");
    if (e.finish > problem.horizon) add(ViolationKind::Horizon, {e.task}, "finishes after the horizon");
    placed.emplace(e.task, e);
  }

  for (const auto& [id, e] : placed) {
    const auto& task = problem.tasks[static_cast<std::size_t>(id)];
    for (const auto& w : task.waits) {
      auto it = placed.find(w.predecessor);
      if (it == placed.end()) {
        add(ViolationKind::Wait, {w.predecessor, id}, "wait predecessor not scheduled");
      } else if (e.start < it->second.finish + w.ticks) {
        add(ViolationKind::Wait, {w.predecessor, id}, "starts before predecessor finish + wait");
      }
    }
    if (task.abs_deadline && e.finish > *task.abs_deadline) {
      add(ViolationKind::AbsoluteDeadline, {id}, "finishes after its absolute deadline");
    }
    for (const auto& r : task.rel_deadlines) {
      auto it = placed.find(r.anchor);
      if (it != placed.end() && e.finish - it->second.start > r.bound) {
        add(ViolationKind::RelativeDeadline, {r.anchor, id}, "finish - anchor start exceeds bound");
      }
    }
  }

  std::vector<ScheduleEntry> ordered;
  for (const auto& [id, e] : placed) ordered.push_back(e);
  std::sort(ordered.begin(), ordered.end(), [](const ScheduleEntry& a, const ScheduleEntry& b) {
    return a.start != b.start ? a.start < b.start : a.task < b.task;
  });
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      const auto& a = ordered[i];
      const auto& b = ordered[j];
      if (!overlaps(a, b)) continue;
      if (problem.tasks[static_cast<std::size_t>(a.task)].resource ==
          problem.tasks[static_cast<std::size_t>(b.task)].resource) {
        add(ViolationKind::ResourceOverlap, {a.task, b.task}, "tasks overlap on a shared resource");
      }
      if (a.agent == b.agent) {
        add(ViolationKind::AgentOverlap, {a.task, b.task}, "agent executes overlapping tasks");
      }
    }
  }

  for (const auto& agent : problem.agents) {
    Point at = agent.start_location;
    Tick free_at = 0;
    for (const auto& e : ordered) {
      if (e.agent != agent.id) continue;
      const auto& loc = problem.tasks[static_cast<std::size_t>(e.task)].location;
      if (e.start < free_at + travel_ticks(distance(at, loc), agent.speed)) {
        add(ViolationKind::Reachability, {e.task}, "agent cannot reach the task location in time");
      }
      at = loc;
      free_at = std::max(free_at, e.finish);
    }
  }

  const bool covers_all = placed.size() == problem.num_tasks() &&
                          schedule.entries.size() == problem.num_tasks();
  if (schedule.complete != covers_all) {
    add(ViolationKind::Coverage, {}, schedule.complete ? "marked complete but tasks are missing"
                                                       : "covers every task but marked incomplete");
  }
  if (schedule.complete && schedule.objective != makespan(schedule)) {
    add(ViolationKind::Objective, {}, "objective differs from the makespan");
  }
  return report;
}

}  // namespace apsched
