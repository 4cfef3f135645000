#ifndef APSCHED_RULES_HPP
#define APSCHED_RULES_HPP

#include <span>
#include <string>
#include <vector>

#include "apsched/features.hpp"
#include "apsched/problem.hpp"
#include "apsched/sim_state.hpp"

namespace apsched {

enum class RuleKind { TravelDistance, ResourceContention, TemporalRequirements };

std::string to_string(RuleKind kind);
RuleKind rule_kind_from_string(const std::string& s);

/// Weighting constants of the mock expert. The defaults are our own choice.
struct RuleParams {
  double alpha1 = 1.0;
  double alpha2 = 0.1;
  double alpha3 = 0.1;
  long contention_threshold = 100;
  double slow_speed = 1.0;  // grid units per tick; 1 unit = 1 m
};

/// Travel-bound speed first, then heavy resource sharing, else deadlines.
RuleKind select_rule(const ProblemInstance& problem, const RuleParams& params = {});

/// Same cascade evaluated from observed context features.
RuleKind select_rule(const ContextFeatures& context, const RuleParams& params = {});

double vrp_score(double dist, double angle, double alpha1, double alpha2);
double rc_score(int share_count, Tick deadline, double alpha3);

TaskId vrp_priority(const ProblemInstance& problem, const SimState& state, const AgentSpec& agent,
                    std::span<const TaskId> candidates, double alpha1, double alpha2);
TaskId rc_priority(const ProblemInstance& problem, const SimState& state, std::span<const TaskId> candidates,
                   double alpha3);
TaskId edf_priority(const ProblemInstance& problem, const SimState& state, std::span<const TaskId> candidates);

/// Dispatches to the heuristic for `kind`.
TaskId rule_choice(RuleKind kind, const RuleParams& params, const ProblemInstance& problem, const SimState& state,
                   const AgentSpec& agent, std::span<const TaskId> candidates);

/// Rule preference as a score where larger is better, computed from observed
/// features only. Used to wrap the mock expert as a policy.
double rule_preference(RuleKind kind, const RuleParams& params, const TaskFeatures& f);

}  // namespace apsched

#endif  // APSCHED_RULES_HPP
