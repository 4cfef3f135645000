#ifndef APSCHED_APPRENTICE_HPP
#define APSCHED_APPRENTICE_HPP

#include <optional>

#include "apsched/policy.hpp"
#include "apsched/problem.hpp"
#include "apsched/sim_state.hpp"

namespace apsched {

struct SchedulerConfig {
  bool use_schedulability_test = true;
  /// Ranked candidates tried per (tick, agent); unset tries all of them.
  /// A depth of 1 with the test disabled is the plain policy rollout.
  std::optional<std::size_t> fallback_depth;
  PolicyMode mode = PolicyMode::Best;
};

/// Necessary condition for the rest of the problem to stay schedulable after
/// starting `task` on `agent` now: every started task meets its deadlines and
/// every pending task still has a capable agent that could finish it in time
/// (resource queues and other agents' future work are ignored).
bool schedulability_test(const ProblemInstance& problem, const SimState& state, TaskId task, AgentId agent);

/// Rolls the policy forward tick by tick. Idle agents are visited in id
/// order; each tries its ranked startable tasks until one passes act() and,
/// when enabled, the schedulability test. The result is incomplete when the
/// horizon is reached first.
Schedule construct_schedule(const ProblemInstance& problem, const Policy& policy, const SchedulerConfig& config = {});

}  // namespace apsched

#endif  // APSCHED_APPRENTICE_HPP
