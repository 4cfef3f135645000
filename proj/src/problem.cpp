#include "apsched/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace apsched {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Tick travel_ticks(double dist, double speed) {
  if (dist <= 0.0) return 0;
  // Tolerance keeps exact quotients such as 10/1 from rounding up to 11.
  return static_cast<Tick>(std::ceil(dist / speed - 1e-9));
}

std::optional<Tick> TaskSpec::duration_for(AgentId agent) const {
  for (const auto& d : durations) {
    if (d.agent == agent) return d.ticks;
  }
  return std::nullopt;
}

Tick TaskSpec::min_duration() const {
  Tick best = std::numeric_limits<Tick>::max();
  for (const auto& d : durations) best = std::min(best, d.ticks);
  return best;
}

Tick TaskSpec::max_duration() const {
  Tick best = 0;
  for (const auto& d : durations) best = std::max(best, d.ticks);
  return best;
}

const TaskSpec& ProblemInstance::task(TaskId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tasks.size()) {
    throw StructuralError("unknown task id " + std::to_string(id));
  }
  return tasks[static_cast<std::size_t>(id)];
}

const AgentSpec& ProblemInstance::agent(AgentId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= agents.size()) {
    throw StructuralError("unknown agent id " + std::to_string(id));
  }
  return agents[static_cast<std::size_t>(id)];
}

long ProblemInstance::resource_contention() const {
  std::vector<long> per_resource(resources.size(), 0);
  for (const auto& t : tasks) {
    if (t.resource >= 0 && static_cast<std::size_t>(t.resource) < per_resource.size()) {
      ++per_resource[static_cast<std::size_t>(t.resource)];
    }
  }
  long total = 0;
  for (long c : per_resource) total += c * c;
  return total;
}

double ProblemInstance::min_agent_speed() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : agents) best = std::min(best, a.speed);
  return best;
}

namespace {

void check_wait_graph_acyclic(const ProblemInstance& p) {
  const std::size_t n = p.tasks.size();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& t : p.tasks) {
    for (const auto& w : t.waits) {
      succ[static_cast<std::size_t>(w.predecessor)].push_back(static_cast<std::size_t>(t.id));
      ++indegree[static_cast<std::size_t>(t.id)];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t j : succ[i]) {
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  if (seen != n) throw StructuralError("wait-constraint graph contains a cycle");
}

}  // namespace

void ProblemInstance::check() const {
  for (std::size_t i = 0; i < resources.size(); ++i) {
    if (resources[i] != static_cast<ResourceId>(i)) {
      throw StructuralError("resource ids must be positional");
    }
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    if (a.id != static_cast<AgentId>(i)) throw StructuralError("agent ids must be positional");
    if (!(a.speed > 0.0)) throw StructuralError("agent speed must be positive");
    if (a.start_location.x < 0 || a.start_location.y < 0 ||
        a.start_location.x > grid_size.width || a.start_location.y > grid_size.height) {
      throw StructuralError("agent start location outside the grid");
    }
  }
  Tick duration_sum = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const std::string where = "task " + std::to_string(i) + ": ";
    if (t.id != static_cast<TaskId>(i)) throw StructuralError(where + "ids must be positional");
    if (t.durations.empty()) throw StructuralError(where + "no capable agent");
    std::set<AgentId> seen_agents;
    for (const auto& d : t.durations) {
      if (d.agent < 0 || static_cast<std::size_t>(d.agent) >= agents.size()) {
        throw StructuralError(where + "duration for unknown agent");
      }
      if (!seen_agents.insert(d.agent).second) {
        throw StructuralError(where + "duplicate duration entry");
      }
      if (d.ticks <= 0) throw StructuralError(where + "durations must be positive");
    }
    if (t.resource < 0 || static_cast<std::size_t>(t.resource) >= resources.size()) {
      throw StructuralError(where + "unknown resource");
    }
    for (const auto& w : t.waits) {
      if (w.predecessor < 0 || static_cast<std::size_t>(w.predecessor) >= tasks.size() ||
          w.predecessor == t.id) {
        throw StructuralError(where + "wait references an unknown task");
      }
      if (w.ticks < 0) throw StructuralError(where + "negative wait");
    }
    for (const auto& r : t.rel_deadlines) {
      if (r.anchor < 0 || static_cast<std::size_t>(r.anchor) >= tasks.size() || r.anchor == t.id) {
        throw StructuralError(where + "relative deadline references an unknown task");
      }
    }
    duration_sum += t.max_duration();
  }
  if (horizon < duration_sum) {
    throw StructuralError("horizon shorter than the sum of maximum durations");
  }
  check_wait_graph_acyclic(*this);
}

const ScheduleEntry* Schedule::find(TaskId task) const {
  for (const auto& e : entries) {
    if (e.task == task) return &e;
  }
  return nullptr;
}

Tick makespan(const Schedule& schedule) {
  Tick best = 0;
  for (const auto& e : schedule.entries) best = std::max(best, e.finish);
  return best;
}

void finalize(Schedule& schedule, const ProblemInstance& problem) {
  std::sort(schedule.entries.begin(), schedule.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              if (a.start != b.start) return a.start < b.start;
              return a.task < b.task;
            });
  schedule.objective = makespan(schedule);
  std::vector<int> count(problem.num_tasks(), 0);
  bool ok = schedule.entries.size() == problem.num_tasks();
  for (const auto& e : schedule.entries) {
    if (e.task < 0 || static_cast<std::size_t>(e.task) >= count.size() || ++count[static_cast<std::size_t>(e.task)] > 1) {
      ok = false;
    }
  }
  schedule.complete = ok;
}

}  // namespace apsched
