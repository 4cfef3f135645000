#ifndef APSCHED_MODEL_HPP
#define APSCHED_MODEL_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "apsched/problem.hpp"

namespace apsched {

struct ModelVariable {
  enum class Kind { Binary, Continuous };
  std::string name;
  Kind kind = Kind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct LinearConstraint {
  enum class Sense { LessEqual, GreaterEqual, Equal };
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  Sense sense = Sense::Equal;
  double rhs = 0.0;

  bool satisfied(const std::vector<double>& values, double tol = 1e-6) const;
};

/// Mixed-integer formulation: assignment binaries x[i][a], one sequencing
/// binary per task pair that shares a resource or a capable agent (1 means
/// the lower id goes first), start/finish times and the makespan C.
/// Disjunctions are linearised with big-M = horizon + longest travel.
struct SchedModel {
  ProblemInstance problem;
  std::vector<ModelVariable> variables;
  std::vector<LinearConstraint> constraints;
  double big_m = 0.0;

  std::vector<std::vector<int>> x;          // [task][agent], -1 if incapable
  std::map<std::pair<TaskId, TaskId>, int> y;  // key (i, j) with i < j
  std::vector<int> s, f;
  int makespan = -1;

  std::size_t num_binaries() const;
  /// Travel ticks between task locations, and from agent starts.
  Tick travel(TaskId from, TaskId to, AgentId agent) const;
  Tick start_travel(AgentId agent, TaskId to) const;
};

SchedModel formulate(const ProblemInstance& problem);

/// Whether a complete schedule, read as an assignment of the model's
/// variables, satisfies every constraint. Each sequencing binary is chosen
/// independently, which is exact because it appears only in its pair's rows.
bool model_accepts(const SchedModel& model, const Schedule& schedule);

}  // namespace apsched

#endif  // APSCHED_MODEL_HPP
