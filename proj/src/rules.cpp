#include "apsched/rules.hpp"

#include <cmath>
#include <stdexcept>

namespace apsched {

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::TravelDistance: return "travel_distance";
    case RuleKind::ResourceContention: return "resource_contention";
    case RuleKind::TemporalRequirements: return "temporal_requirements";
  }
  return "unknown";
}

RuleKind rule_kind_from_string(const std::string& s) {
  if (s == "travel_distance") return RuleKind::TravelDistance;
  if (s == "resource_contention") return RuleKind::ResourceContention;
  if (s == "temporal_requirements") return RuleKind::TemporalRequirements;
  throw std::invalid_argument("unknown rule kind: " + s);
}

RuleKind select_rule(const ProblemInstance& problem, const RuleParams& params) {
  if (problem.min_agent_speed() <= params.slow_speed) return RuleKind::TravelDistance;
  if (problem.resource_contention() >= params.contention_threshold) return RuleKind::ResourceContention;
  return RuleKind::TemporalRequirements;
}

RuleKind select_rule(const ContextFeatures& context, const RuleParams& params) {
  if (context.agent_speed() <= params.slow_speed) return RuleKind::TravelDistance;
  if (context.resource_contention() >= static_cast<double>(params.contention_threshold)) {
    return RuleKind::ResourceContention;
  }
  return RuleKind::TemporalRequirements;
}

double vrp_score(double dist, double angle, double alpha1, double alpha2) {
  return dist + alpha1 * angle + alpha2 * dist * angle;
}

double rc_score(int share_count, Tick deadline, double alpha3) {
  return static_cast<double>(share_count) - alpha3 * static_cast<double>(deadline);
}

namespace {

void require_candidates(std::span<const TaskId> candidates, const char* rule) {
  if (candidates.empty()) throw std::invalid_argument(std::string(rule) + ": empty candidate set");
}

// Strict comparisons over candidates in the given (ascending id) order keep
// the lowest id on ties.
template <typename Score, typename Better>
TaskId best_of(std::span<const TaskId> candidates, Score score, Better better) {
  TaskId best = candidates.front();
  auto best_score = score(best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto s = score(candidates[i]);
    if (better(s, best_score) || (s == best_score && candidates[i] < best)) {
      best = candidates[i];
      best_score = s;
    }
  }
  return best;
}

}  // namespace

TaskId vrp_priority(const ProblemInstance& problem, const SimState& state, const AgentSpec& agent,
                    std::span<const TaskId> candidates, double alpha1, double alpha2) {
  require_candidates(candidates, "vrp_priority");
  const Point& at = state.agent_location[static_cast<std::size_t>(agent.id)];
  return best_of(
      candidates,
      [&](TaskId id) {
        const auto& loc = problem.task(id).location;
        return vrp_score(distance(at, loc), angle_from_origin(at, loc), alpha1, alpha2);
      },
      [](double a, double b) { return a < b; });
}

TaskId rc_priority(const ProblemInstance& problem, const SimState& state, std::span<const TaskId> candidates,
                   double alpha3) {
  require_candidates(candidates, "rc_priority");
  return best_of(
      candidates,
      [&](TaskId id) {
        const auto& t = problem.task(id);
        return rc_score(resource_share_count(problem, state, t), effective_deadline(problem, state, t), alpha3);
      },
      [](double a, double b) { return a > b; });
}

TaskId edf_priority(const ProblemInstance& problem, const SimState& state, std::span<const TaskId> candidates) {
  require_candidates(candidates, "edf_priority");
  return best_of(
      candidates, [&](TaskId id) { return effective_deadline(problem, state, problem.task(id)); },
      [](Tick a, Tick b) { return a < b; });
}

TaskId rule_choice(RuleKind kind, const RuleParams& params, const ProblemInstance& problem, const SimState& state,
                   const AgentSpec& agent, std::span<const TaskId> candidates) {
  switch (kind) {
    case RuleKind::TravelDistance:
      return vrp_priority(problem, state, agent, candidates, params.alpha1, params.alpha2);
    case RuleKind::ResourceContention: return rc_priority(problem, state, candidates, params.alpha3);
    case RuleKind::TemporalRequirements: return edf_priority(problem, state, candidates);
  }
  throw std::logic_error("unhandled rule kind");
}

double rule_preference(RuleKind kind, const RuleParams& params, const TaskFeatures& f) {
  switch (kind) {
    case RuleKind::TravelDistance:
      return -vrp_score(f.travel_distance(), f.angular_difference(), params.alpha1, params.alpha2);
    case RuleKind::ResourceContention:
      return rc_score(static_cast<int>(std::lround(f.resource_share_count())) + 1,
                      static_cast<Tick>(std::llround(f.deadline())), params.alpha3);
    case RuleKind::TemporalRequirements: return -f.deadline();
  }
  throw std::logic_error("unhandled rule kind");
}

}  // namespace apsched
