#include "apsched/covas.hpp"

namespace apsched {

CovasResult covas(const ProblemInstance& problem, const Policy& policy, const SchedulerConfig& scheduler,
                  const BnBOptions& options) {
  CovasResult r;
  r.seed = construct_schedule(problem, policy, scheduler);
  r.seed_report = validate_schedule(problem, r.seed);
  r.seed_usable = r.seed.complete && r.seed_report.feasible();
  r.search = branch_and_bound(formulate(problem), r.seed, options);
  return r;
}

}  // namespace apsched
