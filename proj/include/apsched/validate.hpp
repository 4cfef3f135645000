#ifndef APSCHED_VALIDATE_HPP
#define APSCHED_VALIDATE_HPP

#include <string>
#include <vector>

#include "apsched/problem.hpp"

namespace apsched {

enum class ViolationKind {
  UnknownTask,
  UnknownAgent,
  DuplicateTask,
  IncapableAgent,
  DurationMismatch,
  NegativeStart,
  Horizon,
  Wait,
  AbsoluteDeadline,
  RelativeDeadline,
  ResourceOverlap,
  AgentOverlap,
  Reachability,
  Coverage,
  Objective,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<TaskId> tasks;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

/// Checks every constraint of `problem` against `schedule`. Violations are
/// data; this never throws.
FeasibilityReport validate_schedule(const ProblemInstance& problem, const Schedule& schedule);

}  // namespace apsched

#endif  // APSCHED_VALIDATE_HPP
