#ifndef APSCHED_TEST_UTIL_HPP
#define APSCHED_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "apsched/problem.hpp"
#include "apsched/synthetic.hpp"
#include "apsched/validate.hpp"

namespace testutil {

using namespace apsched;

/// Small hand-built instance: agents at the given points with one common
/// speed, tasks added with add_task.
struct Builder {
  ProblemInstance p;

  explicit Builder(std::vector<Point> agent_starts, double speed = 1.0, Tick horizon = 100, int resources = 1) {
    p.horizon = horizon;
    for (std::size_t a = 0; a < agent_starts.size(); ++a) {
      p.agents.push_back({static_cast<AgentId>(a), agent_starts[a], speed});
    }
    for (int r = 0; r < resources; ++r) p.resources.push_back(r);
  }

  /// Same duration for every agent unless `capable` restricts the set.
  TaskSpec& add_task(Point loc, Tick dur, ResourceId res = 0, std::optional<Tick> deadline = std::nullopt,
                     std::vector<AgentId> capable = {}) {
    TaskSpec t;
    t.id = static_cast<TaskId>(p.tasks.size());
    t.location = loc;
    t.resource = res;
    t.abs_deadline = deadline;
    if (capable.empty()) {
      for (const auto& a : p.agents) capable.push_back(a.id);
    }
    for (AgentId a : capable) t.durations.push_back({a, dur});
    p.tasks.push_back(t);
    return p.tasks.back();
  }

  ProblemInstance build() const {
    p.check();
    return p;
  }
};

inline Schedule make_schedule(const ProblemInstance& p, std::vector<ScheduleEntry> entries) {
  Schedule s;
  s.entries = std::move(entries);
  finalize(s, p);
  return s;
}

inline Tick ticks_between(const Point& a, const Point& b, double speed) {
  const double d = std::hypot(a.x - b.x, a.y - b.y);
  return static_cast<Tick>(std::ceil(d / speed - 1e-9));
}

/// Exhaustive search over (agent, start tick) for every task, with pairwise
/// constraint checks written independently of the library. Returns the
/// minimum makespan, or nullopt when no schedule fits the horizon.
inline std::optional<Tick> brute_force_makespan(const ProblemInstance& p, Schedule* best_out = nullptr) {
  const std::size_t n = p.num_tasks();
  if (n == 0) return 0;
  std::vector<ScheduleEntry> placed(n);
  Tick best = p.horizon + 1;
  std::vector<ScheduleEntry> best_entries;

  auto compatible = [&](std::size_t i, std::size_t j) {
    const auto& a = placed[i];
    const auto& b = placed[j];
    const auto& ti = p.tasks[i];
    const auto& tj = p.tasks[j];
    const bool overlap = a.start < b.finish && b.start < a.finish;
    if (ti.resource == tj.resource && overlap) return false;
    if (a.agent == b.agent) {
      const double v = p.agents[static_cast<std::size_t>(a.agent)].speed;
      const bool ij = a.finish + ticks_between(ti.location, tj.location, v) <= b.start;
      const bool ji = b.finish + ticks_between(tj.location, ti.location, v) <= a.start;
      if (!ij && !ji) return false;
    }
    for (const auto& w : ti.waits) {
      if (static_cast<std::size_t>(w.predecessor) == j && a.start < b.finish + w.ticks) return false;
    }
    for (const auto& w : tj.waits) {
      if (static_cast<std::size_t>(w.predecessor) == i && b.start < a.finish + w.ticks) return false;
    }
    for (const auto& r : ti.rel_deadlines) {
      if (static_cast<std::size_t>(r.anchor) == j && a.finish - b.start > r.bound) return false;
    }
    for (const auto& r : tj.rel_deadlines) {
      if (static_cast<std::size_t>(r.anchor) == i && b.finish - a.start > r.bound) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (i == n) {
      Tick m = 0;
      for (const auto& e : placed) m = std::max(m, e.finish);
      if (m < best) {
        best = m;
        best_entries = placed;
      }
      return;
    }
    const auto& t = p.tasks[i];
    for (const auto& d : t.durations) {
      const auto& agent = p.agents[static_cast<std::size_t>(d.agent)];
      const Tick reach = ticks_between(agent.start_location, t.location, agent.speed);
      Tick last = std::min(p.horizon, best - 1) - d.ticks;
      if (t.abs_deadline) last = std::min(last, *t.abs_deadline - d.ticks);
      for (Tick s = reach; s <= last; ++s) {
        placed[i] = {t.id, d.agent, s, s + d.ticks};
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j) ok = compatible(i, j);
        if (ok) dfs(i + 1);
        last = std::min(last, best - 1 - d.ticks);
      }
    }
  };
  dfs(0);
  if (best > p.horizon) return std::nullopt;
  if (best_out) {
    Schedule s;
    s.entries = best_entries;
    finalize(s, p);
    *best_out = s;
  }
  return best;
}

/// Random instance with at most `max_tasks` tasks and `max_agents` agents on
/// a small grid, so exhaustive search stays cheap.
inline ProblemInstance small_instance(std::uint64_t seed, int max_tasks = 4, int max_agents = 2) {
  GenConfig c;
  const std::uint64_t h = derive_seed(seed, "small");
  c.num_tasks = 1 + static_cast<int>(h % static_cast<std::uint64_t>(max_tasks));
  c.num_agents = 1 + static_cast<int>((h >> 8) % static_cast<std::uint64_t>(max_agents));
  c.homogeneous = ((h >> 16) & 1U) == 0;
  c.grid = {6, 6};
  c.num_resources = 2;
  c.duration_range = {1, 5};
  c.max_wait = 3;
  c.fraction_with_waits = 0.5;
  c.fraction_relative = 0.5;
  c.rng_seed = seed;
  return generate_instance(c);
}

}  // namespace testutil

#endif  // APSCHED_TEST_UTIL_HPP
