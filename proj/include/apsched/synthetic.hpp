#ifndef APSCHED_SYNTHETIC_HPP
#define APSCHED_SYNTHETIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apsched/features.hpp"
#include "apsched/problem.hpp"
#include "apsched/rules.hpp"

namespace apsched {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteDemonstration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance generator parameters. The distributions are our own choices;
/// the defaults give two homogeneous agents and 20 partially ordered tasks on
/// a 20x20 grid.
struct GenConfig {
  int num_agents = 2;
  int num_tasks = 20;
  GridSize grid{20, 20};
  bool homogeneous = true;
  double fraction_with_waits = 0.3;
  double fraction_with_deadlines = 0.6;
  /// Share of wait-constrained tasks that also get a relative deadline on
  /// their predecessor.
  double fraction_relative = 0.3;
  int num_resources = 5;
  /// Absolute deadlines are drawn up to this multiple of the noiseless
  /// expert's deadline-free makespan.
  double deadline_scale = 1.2;
  std::pair<Tick, Tick> duration_range{1, 10};
  std::pair<double, double> speed_range{0.5, 3.0};
  Tick max_wait = 5;
  std::uint64_t rng_seed = 0;
  int max_retries = 200;
  RuleParams rule;

  /// Throws std::invalid_argument when a field is out of range.
  void check() const;
};

/// Presets that put an instance in one regime of the rule cascade.
enum class ProblemType { Mixed, TravelDistance, ResourceContention, TemporalRequirements };

std::string to_string(ProblemType type);
ProblemType problem_type_from_string(const std::string& s);
/// ResourceContention throws std::invalid_argument when num_tasks^2 is below
/// the contention threshold, since no resource split can reach it.
GenConfig preset(ProblemType type, int num_tasks, std::uint64_t seed);

struct Demonstration {
  ProblemInstance problem;
  std::vector<Observation> observations;
  RuleKind rule_used = RuleKind::TemporalRequirements;
  double epsilon = 0.0;
  std::uint64_t rng_seed = 0;

  std::size_t num_scheduling() const;
  std::size_t num_idle() const;

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

/// Random instance that the noiseless mock expert solves feasibly. Throws
/// GenerationError once the retry budget is spent.
ProblemInstance generate_instance(const GenConfig& config);

/// epsilon-greedy mock expert. At every tick each idle agent (in id order)
/// records one observation; with probability 1-epsilon it starts the rule's
/// choice among the startable tasks, otherwise a uniformly drawn other
/// startable task.
Demonstration demonstrate(const ProblemInstance& problem, double epsilon, std::uint64_t rng_seed,
                          const RuleParams& params = {});

/// Schedule executed by the demonstrator.
Schedule demonstrated_schedule(const Demonstration& demo);

/// Deterministic 64-bit mixing of a master seed with a label.
std::uint64_t derive_seed(std::uint64_t master, const std::string& label);

}  // namespace apsched

#endif  // APSCHED_SYNTHETIC_HPP
