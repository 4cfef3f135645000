#ifndef APSCHED_PERTURB_HPP
#define APSCHED_PERTURB_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apsched/problem.hpp"

namespace apsched {

class PerturbationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// swap: two tasks on different agents exchange agents.
/// steal: one task moves to another capable agent.
/// sequence: two tasks on one agent exchange places in its sequence.
enum class PerturbKind { Swap, Steal, Sequence };

std::string to_string(PerturbKind kind);
PerturbKind perturb_kind_from_string(const std::string& s);

/// Earliest schedule that keeps the given agents and the relative order of
/// `keys` on every agent and every resource. Empty when that order cannot
/// meet the constraints.
std::optional<Schedule> retime(const ProblemInstance& problem, const std::vector<AgentId>& agent,
                               const std::vector<double>& keys);

/// Applies `count` random perturbations to a complete schedule and re-times
/// it, redrawing (up to `max_retries` times) while the result is infeasible.
Schedule perturb(const ProblemInstance& problem, const Schedule& schedule, PerturbKind kind, int count,
                 std::uint64_t rng_seed, int max_retries = 200);

/// makespan(seed) / makespan(optimal). Throws std::logic_error when the
/// "optimal" schedule is worse than the seed, std::invalid_argument when
/// either is incomplete or has zero makespan.
double objective_ratio(const Schedule& seed, const Schedule& optimal);

}  // namespace apsched

#endif  // APSCHED_PERTURB_HPP
