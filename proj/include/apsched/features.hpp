#ifndef APSCHED_FEATURES_HPP
#define APSCHED_FEATURES_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "apsched/problem.hpp"
#include "apsched/sim_state.hpp"

namespace apsched {

inline constexpr std::size_t kNumTaskFeatures = 7;
inline constexpr std::size_t kNumContextFeatures = 2;
inline constexpr const char* kFeatureSchema = "v1";

/// Per-task state seen by one agent. Order is fixed:
/// deadline, precedence_satisfied, resource_share_count, resource_available,
/// travel_time_remaining, travel_distance, angular_difference.
struct TaskFeatures {
  std::array<double, kNumTaskFeatures> values{};

  double deadline() const { return values[0]; }
  double precedence_satisfied() const { return values[1]; }
  double resource_share_count() const { return values[2]; }
  double resource_available() const { return values[3]; }
  double travel_time_remaining() const { return values[4]; }
  double travel_distance() const { return values[5]; }
  double angular_difference() const { return values[6]; }

  /// Startable now: precedence satisfied, resource free and already reachable.
  bool startable() const {
    return precedence_satisfied() > 0.5 && resource_available() > 0.5 && travel_time_remaining() <= 0.0;
  }

  friend bool operator==(const TaskFeatures&, const TaskFeatures&) = default;
};

/// agent_speed, resource_contention_degree
struct ContextFeatures {
  std::array<double, kNumContextFeatures> values{};

  double agent_speed() const { return values[0]; }
  double resource_contention() const { return values[1]; }

  friend bool operator==(const ContextFeatures&, const ContextFeatures&) = default;
};

const std::array<std::string, kNumTaskFeatures>& task_feature_names();
const std::array<std::string, kNumContextFeatures>& context_feature_names();

struct ObservedTask {
  TaskId id = 0;
  TaskFeatures features;

  friend bool operator==(const ObservedTask&, const ObservedTask&) = default;
};

struct ScheduledAction {
  TaskId task = 0;
  AgentId agent = 0;

  friend bool operator==(const ScheduledAction&, const ScheduledAction&) = default;
};

/// One (tick, idle agent) decision point. `tasks` lists every task not yet
/// started, ascending id; an absent `scheduled` is the null action.
struct Observation {
  Tick tick = 0;
  AgentId agent = 0;
  ContextFeatures context;
  std::vector<ObservedTask> tasks;
  std::optional<ScheduledAction> scheduled;
  /// What the noiseless rule would have picked (absent when idle).
  std::optional<TaskId> rule_choice;
  /// Number of startable tasks the agent faced.
  int num_candidates = 0;

  const ObservedTask* find(TaskId id) const;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Angle in radians between origin->a and origin->b; 0 if either is zero-length.
double angle_from_origin(const Point& a, const Point& b);

/// Unfinished tasks (including `task`) that need `task`'s resource.
int resource_share_count(const ProblemInstance& problem, const SimState& state, const TaskSpec& task);

TaskFeatures extract_features(const ProblemInstance& problem, const SimState& state, const AgentSpec& agent,
                              const TaskSpec& task);

ContextFeatures extract_context(const ProblemInstance& problem, const AgentSpec& agent);

/// Observation for `agent` at `state` with no action recorded yet.
Observation observe(const ProblemInstance& problem, const SimState& state, AgentId agent);

}  // namespace apsched

#endif  // APSCHED_FEATURES_HPP
