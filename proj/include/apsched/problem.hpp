#ifndef APSCHED_PROBLEM_HPP
#define APSCHED_PROBLEM_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace apsched {

using Tick = std::int64_t;
using TaskId = int;
using AgentId = int;
using ResourceId = int;

/// Raised when an instance or schedule references things that do not exist
/// or breaks a structural invariant (cyclic waits, duplicate ids, ...).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

/// Whole ticks needed to cover `dist` at `speed`, rounded up.
Tick travel_ticks(double dist, double speed);

struct AgentDuration {
  AgentId agent = 0;
  Tick ticks = 0;

  friend bool operator==(const AgentDuration&, const AgentDuration&) = default;
};

/// finish(owner) - start(anchor) <= bound
struct RelativeDeadline {
  TaskId anchor = 0;
  Tick bound = 0;

  friend bool operator==(const RelativeDeadline&, const RelativeDeadline&) = default;
};

/// start(owner) >= finish(predecessor) + ticks
struct WaitConstraint {
  TaskId predecessor = 0;
  Tick ticks = 0;

  friend bool operator==(const WaitConstraint&, const WaitConstraint&) = default;
};

struct TaskSpec {
  TaskId id = 0;
  Point location;
  std::vector<AgentDuration> durations;  // absent agent = incapable
  ResourceId resource = 0;
  std::optional<Tick> abs_deadline;
  std::vector<RelativeDeadline> rel_deadlines;
  std::vector<WaitConstraint> waits;

  std::optional<Tick> duration_for(AgentId agent) const;
  bool capable(AgentId agent) const { return duration_for(agent).has_value(); }
  Tick min_duration() const;
  Tick max_duration() const;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct AgentSpec {
  AgentId id = 0;
  Point start_location;
  double speed = 1.0;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct GridSize {
  int width = 20;
  int height = 20;

  friend bool operator==(const GridSize&, const GridSize&) = default;
};

/// One VRPTW-TDR instance. Ids are positional: tasks[i].id == i, and the
/// same holds for agents and resources.
struct ProblemInstance {
  GridSize grid_size;
  std::vector<AgentSpec> agents;
  std::vector<TaskSpec> tasks;
  std::vector<ResourceId> resources;
  Tick horizon = 0;

  std::size_t num_tasks() const { return tasks.size(); }
  std::size_t num_agents() const { return agents.size(); }

  const TaskSpec& task(TaskId id) const;
  const AgentSpec& agent(AgentId id) const;

  /// Sum over ordered task pairs of 1[same resource], self pairs included.
  long resource_contention() const;
  double min_agent_speed() const;

  /// Throws StructuralError on the first broken invariant.
  void check() const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

struct ScheduleEntry {
  TaskId task = 0;
  AgentId agent = 0;
  Tick start = 0;
  Tick finish = 0;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;  // sorted by (start, task)
  Tick objective = 0;
  bool complete = false;

  const ScheduleEntry* find(TaskId task) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Latest finish tick; 0 for an empty schedule.
Tick makespan(const Schedule& schedule);

/// Sorts entries, recomputes the objective and sets `complete` iff every task
/// of `problem` appears exactly once.
void finalize(Schedule& schedule, const ProblemInstance& problem);

}  // namespace apsched

#endif  // APSCHED_PROBLEM_HPP
