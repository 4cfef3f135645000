#include "apsched/perturb.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "apsched/temporal_network.hpp"
#include "apsched/validate.hpp"

namespace apsched {

std::string to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::Swap: return "swap";
    case PerturbKind::Steal: return "steal";
    case PerturbKind::Sequence: return "sequence";
  }
  return "unknown";
}

PerturbKind perturb_kind_from_string(const std::string& s) {
  if (s == "swap") return PerturbKind::Swap;
  if (s == "steal") return PerturbKind::Steal;
  if (s == "sequence") return PerturbKind::Sequence;
  throw std::invalid_argument("unknown perturbation kind: " + s);
}

std::optional<Schedule> retime(const ProblemInstance& problem, const std::vector<AgentId>& agent,
                               const std::vector<double>& keys) {
  const std::size_t n = problem.num_tasks();
  std::vector<Tick> dur(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = problem.tasks[i].duration_for(agent[i]);
    if (!d) return std::nullopt;
    dur[i] = *d;
  }
  auto by_key = [&](std::vector<TaskId>& ids) {
    std::sort(ids.begin(), ids.end(), [&](TaskId a, TaskId b) {
      const auto ka = keys[static_cast<std::size_t>(a)], kb = keys[static_cast<std::size_t>(b)];
      return ka != kb ? ka < kb : a < b;
    });
  };
  TemporalNetwork net(n);
  for (const auto& a : problem.agents) {
    std::vector<TaskId> seq;
    for (std::size_t i = 0; i < n; ++i) {
      if (agent[i] == a.id) seq.push_back(static_cast<TaskId>(i));
    }
    by_key(seq);
    Point at = a.start_location;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const auto& t = problem.task(seq[k]);
      const Tick travel = travel_ticks(distance(at, t.location), a.speed);
      if (k == 0) {
        net.release(t.id, travel);
      } else {
        net.require_after(seq[k - 1], t.id, dur[static_cast<std::size_t>(seq[k - 1])] + travel);
      }
      at = t.location;
    }
  }
  for (ResourceId r : problem.resources) {
    std::vector<TaskId> seq;
    for (std::size_t i = 0; i < n; ++i) {
      if (problem.tasks[i].resource == r) seq.push_back(static_cast<TaskId>(i));
    }
    by_key(seq);
    for (std::size_t k = 1; k < seq.size(); ++k) {
      net.require_after(seq[k - 1], seq[k], dur[static_cast<std::size_t>(seq[k - 1])]);
    }
  }
  for (const auto& t : problem.tasks) {
    for (const auto& w : t.waits) net.require_after(w.predecessor, t.id, dur[static_cast<std::size_t>(w.predecessor)] + w.ticks);
    for (const auto& r : t.rel_deadlines) net.require_after(t.id, r.anchor, dur[static_cast<std::size_t>(t.id)] - r.bound);
  }
  const auto start = net.least_solution(problem.horizon);
  if (!start) return std::nullopt;
  Schedule s;
  for (std::size_t i = 0; i < n; ++i) {
    s.entries.push_back({static_cast<TaskId>(i), agent[i], (*start)[i], (*start)[i] + dur[i]});
  }
  finalize(s, problem);
  if (!validate_schedule(problem, s).feasible()) return std::nullopt;
  return s;
}

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// One random move of `kind`; false if no move of that kind exists.
bool apply_move(const ProblemInstance& problem, PerturbKind kind, std::vector<AgentId>& agent,
                std::vector<double>& keys, Rng& rng) {
  const std::size_t n = agent.size();
  switch (kind) {
    case PerturbKind::Swap: {
      std::vector<std::pair<std::size_t, std::size_t>> moves;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (agent[i] != agent[j] && problem.tasks[i].capable(agent[j]) && problem.tasks[j].capable(agent[i])) {
            moves.push_back({i, j});
          }
        }
      }
      if (moves.empty()) return false;
      const auto [i, j] = moves[pick(rng, moves.size())];
      std::swap(agent[i], agent[j]);
      return true;
    }
    case PerturbKind::Steal: {
      std::vector<std::pair<std::size_t, AgentId>> moves;
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& d : problem.tasks[i].durations) {
          if (d.agent != agent[i]) moves.push_back({i, d.agent});
        }
      }
      if (moves.empty()) return false;
      const auto [i, a] = moves[pick(rng, moves.size())];
      agent[i] = a;
      return true;
    }
    case PerturbKind::Sequence: {
      std::vector<std::pair<std::size_t, std::size_t>> moves;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (agent[i] == agent[j]) moves.push_back({i, j});
        }
      }
      if (moves.empty()) return false;
      const auto [i, j] = moves[pick(rng, moves.size())];
      std::swap(keys[i], keys[j]);
      return true;
    }
  }
  return false;
}

}  // namespace

Schedule perturb(const ProblemInstance& problem, const Schedule& schedule, PerturbKind kind, int count,
                 std::uint64_t rng_seed, int max_retries) {
  if (count < 0) throw std::invalid_argument("perturbation count must be >= 0");
  if (!schedule.complete) throw PerturbationError("cannot perturb an incomplete schedule");
  const std::size_t n = problem.num_tasks();
  std::vector<AgentId> agent0(n);
  std::vector<double> keys0(n);
  for (const auto& e : schedule.entries) {
    agent0[static_cast<std::size_t>(e.task)] = e.agent;
    // Start time first, task id as a tie breaker inside the same tick.
    keys0[static_cast<std::size_t>(e.task)] = static_cast<double>(e.start) + static_cast<double>(e.task) / (2.0 * static_cast<double>(n + 1));
  }
  Rng rng(rng_seed);
  for (int attempt = 0; attempt < std::max(1, max_retries); ++attempt) {
    auto agent = agent0;
    auto keys = keys0;
    for (int c = 0; c < count; ++c) {
      if (!apply_move(problem, kind, agent, keys, rng)) {
        throw PerturbationError("schedule has no " + to_string(kind) + " move available");
      }
    }
    if (auto s = retime(problem, agent, keys)) return *s;
    if (count == 0) break;
  }
  throw PerturbationError("no feasible " + to_string(kind) + " perturbation after " + std::to_string(max_retries) +
                          " draws");
}

double objective_ratio(const Schedule& seed, const Schedule& optimal) {
  if (!seed.complete || !optimal.complete) throw std::invalid_argument("objective_ratio needs complete schedules");
  const Tick a = makespan(seed), b = makespan(optimal);
  if (a <= 0 || b <= 0) throw std::invalid_argument("objective_ratio needs positive makespans");
  if (b > a) throw std::logic_error("reference schedule is worse than the seed");
  return static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace apsched
