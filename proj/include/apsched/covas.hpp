#ifndef APSCHED_COVAS_HPP
#define APSCHED_COVAS_HPP

#include "apsched/apprentice.hpp"
#include "apsched/bnb.hpp"
#include "apsched/validate.hpp"

namespace apsched {

struct CovasResult {
  Schedule seed;
  FeasibilityReport seed_report;
  bool seed_usable = false;  // complete and feasible
  BnBResult search;
};

/// Builds a schedule with the policy, then runs branch-and-bound seeded with
/// it (unseeded when the policy's schedule is unusable).
CovasResult covas(const ProblemInstance& problem, const Policy& policy, const SchedulerConfig& scheduler = {},
                  const BnBOptions& options = {});

}  // namespace apsched

#endif  // APSCHED_COVAS_HPP
