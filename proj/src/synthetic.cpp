#include "apsched/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "apsched/sim_state.hpp"
#include "apsched/validate.hpp"

namespace apsched {

void GenConfig::check() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (num_agents < 1) throw std::invalid_argument("num_agents must be >= 1");
  if (num_tasks < 0) throw std::invalid_argument("num_tasks must be >= 0");
  if (grid.width < 1 || grid.height < 1) throw std::invalid_argument("grid must be non-empty");
  if (!prob(fraction_with_waits) || !prob(fraction_with_deadlines) || !prob(fraction_relative)) {
    throw std::invalid_argument("fractions must lie in [0,1]");
  }
  if (num_resources < 1) throw std::invalid_argument("num_resources must be >= 1");
  if (duration_range.first < 1 || duration_range.second < duration_range.first) {
    throw std::invalid_argument("duration_range must be a non-empty range of positive ticks");
  }
  if (!(speed_range.first > 0.0) || speed_range.second < speed_range.first) {
    throw std::invalid_argument("speed_range must be a non-empty range of positive speeds");
  }
  if (!(deadline_scale > 0.0)) throw std::invalid_argument("deadline_scale must be > 0");
  if (max_wait < 0) throw std::invalid_argument("max_wait must be >= 0");
  if (max_retries < 1) throw std::invalid_argument("max_retries must be >= 1");
}

std::string to_string(ProblemType type) {
  switch (type) {
    case ProblemType::Mixed: return "mixed";
    case ProblemType::TravelDistance: return "travel_distance";
    case ProblemType::ResourceContention: return "resource_contention";
    case ProblemType::TemporalRequirements: return "temporal_requirements";
  }
  return "unknown";
}

ProblemType problem_type_from_string(const std::string& s) {
  if (s == "mixed") return ProblemType::Mixed;
  if (s == "travel_distance") return ProblemType::TravelDistance;
  if (s == "resource_contention") return ProblemType::ResourceContention;
  if (s == "temporal_requirements") return ProblemType::TemporalRequirements;
  throw std::invalid_argument("unknown problem type: " + s);
}

GenConfig preset(ProblemType type, int num_tasks, std::uint64_t seed) {
  GenConfig c;
  c.num_tasks = num_tasks;
  c.rng_seed = seed;
  switch (type) {
    case ProblemType::Mixed: break;
    case ProblemType::TravelDistance:
      c.speed_range = {0.5, 1.0};
      break;
    case ProblemType::ResourceContention: {
      c.speed_range = {1.5, 3.0};
      // Sum of squared resource loads is at least n^2 / r, so this r always
      // reaches the contention threshold.
      const long n2 = static_cast<long>(num_tasks) * num_tasks;
      if (n2 < c.rule.contention_threshold) {
        throw std::invalid_argument("resource_contention preset needs num_tasks^2 >= the contention threshold");
      }
      c.num_resources = static_cast<int>(std::max<long>(1, n2 / c.rule.contention_threshold));
      break;
    }
    case ProblemType::TemporalRequirements:
      c.speed_range = {1.5, 3.0};
      c.num_resources = std::max(1, num_tasks);
      break;
  }
  return c;
}

std::size_t Demonstration::num_scheduling() const {
  return static_cast<std::size_t>(std::count_if(observations.begin(), observations.end(),
                                                [](const Observation& o) { return o.scheduled.has_value(); }));
}

std::size_t Demonstration::num_idle() const { return observations.size() - num_scheduling(); }

std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = master ^ (h + 0x9E3779B97F4A7C15ULL + (master << 6) + (master >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;  // splitmix64 finalizer
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

using Rng = std::mt19937_64;

Tick uniform_tick(Rng& rng, Tick lo, Tick hi) { return std::uniform_int_distribution<Tick>(lo, hi)(rng); }

double uniform_real(Rng& rng, double lo, double hi) {
  if (hi <= lo) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool bernoulli(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

Point grid_point(Rng& rng, const GridSize& g) {
  return {static_cast<double>(uniform_tick(rng, 0, g.width)), static_cast<double>(uniform_tick(rng, 0, g.height))};
}

// Instance without absolute deadlines.
ProblemInstance draw_structure(const GenConfig& c, Rng& rng) {
  ProblemInstance p;
  p.grid_size = c.grid;
  for (int r = 0; r < c.num_resources; ++r) p.resources.push_back(r);
  // One common speed; a per-instance draw keeps every agent in the same
  // regime of the rule cascade.
  const double speed = std::round(uniform_real(rng, c.speed_range.first, c.speed_range.second) * 100.0) / 100.0;
  for (int a = 0; a < c.num_agents; ++a) {
    p.agents.push_back({a, grid_point(rng, c.grid), std::max(speed, c.speed_range.first)});
  }
  for (int i = 0; i < c.num_tasks; ++i) {
    TaskSpec t;
    t.id = i;
    t.location = grid_point(rng, c.grid);
    const Tick shared = uniform_tick(rng, c.duration_range.first, c.duration_range.second);
    for (int a = 0; a < c.num_agents; ++a) {
      t.durations.push_back(
          {a, c.homogeneous ? shared : uniform_tick(rng, c.duration_range.first, c.duration_range.second)});
    }
    t.resource = static_cast<ResourceId>(uniform_tick(rng, 0, c.num_resources - 1));
    if (i > 0 && bernoulli(rng, c.fraction_with_waits)) {
      const TaskId pred = static_cast<TaskId>(uniform_tick(rng, 0, i - 1));
      const Tick w = uniform_tick(rng, 0, c.max_wait);
      t.waits.push_back({pred, w});
      if (bernoulli(rng, c.fraction_relative)) {
        const Tick slack = uniform_tick(rng, 10, 40);
        t.rel_deadlines.push_back(
            {pred, p.tasks[static_cast<std::size_t>(pred)].max_duration() + w + t.max_duration() + slack});
      }
    }
    p.tasks.push_back(std::move(t));
  }
  const double diag = std::hypot(c.grid.width, c.grid.height);
  Tick horizon = 0;
  for (const auto& t : p.tasks) {
    Tick w = 0;
    for (const auto& wc : t.waits) w = std::max(w, wc.ticks);
    horizon += t.max_duration() + w + travel_ticks(diag, p.min_agent_speed());
  }
  p.horizon = std::max<Tick>(horizon, 1);
  return p;
}

bool expert_feasible(const ProblemInstance& p, const RuleParams& params, Tick* makespan_out) {
  try {
    const auto demo = demonstrate(p, 0.0, 0, params);
    const auto schedule = demonstrated_schedule(demo);
    if (!validate_schedule(p, schedule).feasible()) return false;
    if (makespan_out) *makespan_out = schedule.objective;
    return true;
  } catch (const IncompleteDemonstration&) {
    return false;
  }
}

// Lower bound on each task's finish: fastest approach plus own duration,
// pushed back by wait chains.
std::vector<Tick> earliest_finishes(const ProblemInstance& p) {
  std::vector<Tick> ef(p.num_tasks(), 0);
  for (const auto& t : p.tasks) {  // predecessors always have smaller ids
    Tick best = std::numeric_limits<Tick>::max();
    for (const auto& d : t.durations) {
      const auto& a = p.agents[static_cast<std::size_t>(d.agent)];
      best = std::min(best, travel_ticks(distance(a.start_location, t.location), a.speed) + d.ticks);
    }
    Tick release = 0;
    for (const auto& w : t.waits) release = std::max(release, ef[static_cast<std::size_t>(w.predecessor)] + w.ticks);
    ef[static_cast<std::size_t>(t.id)] = std::max(best, release + t.min_duration());
  }
  return ef;
}

}  // namespace

ProblemInstance generate_instance(const GenConfig& config) {
  config.check();
  Rng rng(config.rng_seed);
  constexpr int kDeadlineDraws = 5;
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    ProblemInstance p = draw_structure(config, rng);
    Tick base_makespan = 0;
    if (!expert_feasible(p, config.rule, &base_makespan)) continue;
    if (config.fraction_with_deadlines <= 0.0) {
      p.check();
      return p;
    }
    const auto ef = earliest_finishes(p);
    for (int draw = 0; draw < kDeadlineDraws; ++draw) {
      ProblemInstance q = p;
      const Tick hi = std::max<Tick>(1, static_cast<Tick>(std::ceil(config.deadline_scale * static_cast<double>(base_makespan))));
      for (auto& t : q.tasks) {
        if (!bernoulli(rng, config.fraction_with_deadlines)) continue;
        const Tick lo = std::max<Tick>(ef[static_cast<std::size_t>(t.id)],
                                       static_cast<Tick>(0.3 * static_cast<double>(base_makespan)));
        t.abs_deadline = uniform_tick(rng, std::min(lo, hi), std::max(lo, hi));
      }
      if (expert_feasible(q, config.rule, nullptr)) {
        q.check();
        return q;
      }
    }
  }
  throw GenerationError("no expert-feasible instance within " + std::to_string(config.max_retries) + " retries");
}

Demonstration demonstrate(const ProblemInstance& problem, double epsilon, std::uint64_t rng_seed,
                          const RuleParams& params) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0,1]");
  Rng rng(rng_seed);
  Demonstration demo;
  demo.problem = problem;
  demo.rule_used = select_rule(problem, params);
  demo.epsilon = epsilon;
  demo.rng_seed = rng_seed;

  SimState state = SimState::initial(problem);
  for (Tick t = 0;; ++t) {
    state.advance_to(t);
    if (state.all_finished()) break;
    if (t > problem.horizon) {
      throw IncompleteDemonstration("horizon reached with unfinished tasks");
    }
    for (const auto& agent : problem.agents) {
      if (!state.agent_idle(agent.id) || state.all_started()) continue;
      Observation obs = observe(problem, state, agent.id);
      const auto candidates = feasible_candidates(problem, state, agent.id);
      obs.num_candidates = static_cast<int>(candidates.size());
      if (!candidates.empty()) {
        const TaskId choice = rule_choice(demo.rule_used, params, problem, state, agent, candidates);
        TaskId pick = choice;
        if (candidates.size() >= 2 && epsilon > 0.0 && bernoulli(rng, epsilon)) {
          std::vector<TaskId> others;
          for (TaskId c : candidates) {
            if (c != choice) others.push_back(c);
          }
          pick = others[static_cast<std::size_t>(uniform_tick(rng, 0, static_cast<Tick>(others.size()) - 1))];
        }
        obs.scheduled = ScheduledAction{pick, agent.id};
        obs.rule_choice = choice;
        state = apply_action(problem, state, pick, agent.id);
      }
      demo.observations.push_back(std::move(obs));
    }
  }
  return demo;
}

Schedule demonstrated_schedule(const Demonstration& demo) {
  Schedule s;
  for (const auto& o : demo.observations) {
    if (!o.scheduled) continue;
    const Tick dur = *demo.problem.task(o.scheduled->task).duration_for(o.scheduled->agent);
    s.entries.push_back({o.scheduled->task, o.scheduled->agent, o.tick, o.tick + dur});
  }
  finalize(s, demo.problem);
  return s;
}

}  // namespace apsched
