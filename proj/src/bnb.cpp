#include "apsched/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "apsched/json_io.hpp"
#include "apsched/temporal_network.hpp"
#include "apsched/validate.hpp"

namespace apsched {

namespace {

constexpr Tick kInf = std::numeric_limits<Tick>::max() / 4;

// Prim's algorithm on k vertices plus a root; kInf marks a missing edge.
template <typename RootEdge, typename Edge>
Tick spanning_tree(std::size_t k, RootEdge root_edge, Edge edge) {
  std::vector<Tick> dist(k);
  std::vector<char> done(k, 0);
  for (std::size_t i = 0; i < k; ++i) dist[i] = root_edge(i);
  Tick total = 0;
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t u = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (!done[i] && (u == k || dist[i] < dist[u])) u = i;
    }
    if (dist[u] >= kInf) return 0;  // disconnected; no bound from this source
    done[u] = 1;
    total += dist[u];
    for (std::size_t i = 0; i < k; ++i) {
      if (!done[i]) dist[i] = std::min(dist[i], edge(u, i));
    }
  }
  return total;
}

}  // namespace

SearchSpace::SearchSpace(const ProblemInstance& problem) : problem_(problem), n_(problem.num_tasks()) {
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), 0);
  auto key = [&](TaskId id) {
    const auto& t = problem_.task(id);
    return std::make_tuple(t.durations.size(), t.abs_deadline.value_or(problem_.horizon), id);
  };
  std::sort(order_.begin(), order_.end(), [&](TaskId a, TaskId b) { return key(a) < key(b); });
  task_travel_.assign(problem_.num_agents(), std::vector<Tick>(n_ * n_, 0));
  start_travel_.assign(problem_.num_agents(), std::vector<Tick>(n_, 0));
  for (const auto& a : problem_.agents) {
    for (const auto& t : problem_.tasks) {
      start_travel_[static_cast<std::size_t>(a.id)][static_cast<std::size_t>(t.id)] =
          travel_ticks(distance(a.start_location, t.location), a.speed);
      for (const auto& u : problem_.tasks) {
        task_travel_[static_cast<std::size_t>(a.id)][static_cast<std::size_t>(t.id) * n_ + static_cast<std::size_t>(u.id)] =
            travel_ticks(distance(t.location, u.location), a.speed);
      }
    }
  }
}

SearchNode SearchSpace::root() const {
  SearchNode node;
  node.agent.assign(n_, -1);
  return node;
}

NodeEvaluation SearchSpace::evaluate(const SearchNode& node) const {
  NodeEvaluation ev;
  ev.duration.resize(n_);
  TemporalNetwork net(n_);
  for (const auto& t : problem_.tasks) {
    const auto i = static_cast<std::size_t>(t.id);
    const AgentId a = node.agent[i];
    if (a >= 0) {
      ev.duration[i] = *t.duration_for(a);
      net.release(t.id, st(a, t.id));
    } else {
      ev.duration[i] = t.min_duration();
      Tick r = kInf;
      for (const auto& d : t.durations) r = std::min(r, st(d.agent, t.id));
      net.release(t.id, r);
    }
  }
  for (const auto& t : problem_.tasks) {
    for (const auto& w : t.waits) {
      net.require_after(w.predecessor, t.id, ev.duration[static_cast<std::size_t>(w.predecessor)] + w.ticks);
    }
    for (const auto& r : t.rel_deadlines) {
      net.require_after(t.id, r.anchor, ev.duration[static_cast<std::size_t>(t.id)] - r.bound);
    }
  }
  for (const auto& [first, second] : node.orders) {
    const AgentId a = node.agent[static_cast<std::size_t>(first)];
    Tick w = ev.duration[static_cast<std::size_t>(first)];
    if (a >= 0 && a == node.agent[static_cast<std::size_t>(second)]) w += tt(first, second, a);
    net.require_after(first, second, w);
  }
  auto least = net.least_solution(problem_.horizon, node.hint.empty() ? nullptr : &node.hint);
  if (!least) return ev;
  ev.start = std::move(*least);
  for (const auto& t : problem_.tasks) {
    const auto i = static_cast<std::size_t>(t.id);
    const Tick f = ev.start[i] + ev.duration[i];
    if (f > problem_.horizon || (t.abs_deadline && f > *t.abs_deadline)) return ev;
  }
  ev.feasible = true;
  ev.bound = bound_of(node, ev);
  if (node.assigned < n_) return ev;

  std::vector<char> decided(n_ * n_, 0);
  for (const auto& [a, b] : node.orders) {
    decided[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)] = 1;
    decided[static_cast<std::size_t>(b) * n_ + static_cast<std::size_t>(a)] = 1;
  }
  Tick best_key = kInf;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (decided[i * n_ + j]) continue;
      const bool same_agent = node.agent[i] == node.agent[j];
      const bool same_resource = problem_.tasks[i].resource == problem_.tasks[j].resource;
      if (!same_agent && !same_resource) continue;
      const Tick si = ev.start[i], sj = ev.start[j];
      const Tick fi = si + ev.duration[i], fj = sj + ev.duration[j];
      bool apart;
      if (same_agent) {
        const AgentId a = node.agent[i];
        apart = fi + tt(static_cast<TaskId>(i), static_cast<TaskId>(j), a) <= sj ||
                fj + tt(static_cast<TaskId>(j), static_cast<TaskId>(i), a) <= si;
      } else {
        apart = fi <= sj || fj <= si;
      }
      if (apart) continue;
      const Tick k = std::min(si, sj);
      if (k < best_key) {
        best_key = k;
        ev.conflict = {static_cast<TaskId>(i), static_cast<TaskId>(j)};
      }
    }
  }
  if (!ev.conflict) {
    ev.leaf = true;
    ev.value = 0;
    for (std::size_t i = 0; i < n_; ++i) ev.value = std::max(ev.value, ev.start[i] + ev.duration[i]);
    ev.bound = std::max(ev.bound, ev.value);
  }
  return ev;
}

Tick SearchSpace::bound_of(const SearchNode& node, const NodeEvaluation& ev) const {
  const std::size_t n = n_;
  if (n == 0) return 0;
  const auto& p = ev.duration;
  const auto& s = ev.start;

  // Work that must follow each task's finish along wait and order arcs.
  std::vector<std::vector<std::pair<std::size_t, Tick>>> succ(n);
  for (const auto& t : problem_.tasks) {
    for (const auto& w : t.waits) {
      const auto pr = static_cast<std::size_t>(w.predecessor);
      succ[pr].push_back({static_cast<std::size_t>(t.id), p[pr] + w.ticks});
    }
  }
  for (const auto& [first, second] : node.orders) {
    const auto a = static_cast<std::size_t>(first), b = static_cast<std::size_t>(second);
    Tick w = p[a];
    if (node.agent[a] >= 0 && node.agent[a] == node.agent[b]) w += tt(first, second, node.agent[a]);
    succ[a].push_back({b, w});
  }
  std::vector<Tick> tail(n, 0);
  for (std::size_t pass = 0; pass <= n; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [j, w] : succ[i]) {
        const Tick cand = w - p[i] + p[j] + tail[j];
        if (cand > tail[i]) {
          tail[i] = cand;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  Tick bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, s[i] + p[i] + tail[i]);

  // One-machine bound: any task set T that runs sequentially ends no earlier
  // than min release + total work + travel into all but the first + min
  // tail. T ranges over release-ordered suffixes and tail-ordered prefixes.
  auto chain_bound = [&](std::vector<std::size_t> group, bool with_travel, AgentId a) {
    if (group.empty()) return Tick{0};
    std::vector<Tick> inc(n, 0);
    if (with_travel && group.size() > 1) {
      for (std::size_t i : group) {
        Tick best = kInf;
        for (std::size_t k : group) {
          if (k != i) best = std::min(best, tt(static_cast<TaskId>(k), static_cast<TaskId>(i), a));
        }
        inc[i] = best;
      }
    }
    Tick out = 0;
    std::sort(group.begin(), group.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });
    Tick work = 0, inc_sum = 0, inc_max = 0, min_tail = kInf;
    for (std::size_t i : group) {  // latest release first: growing suffixes
      work += p[i];
      inc_sum += inc[i];
      inc_max = std::max(inc_max, inc[i]);
      min_tail = std::min(min_tail, tail[i]);
      out = std::max(out, s[i] + work + inc_sum - inc_max + min_tail);
    }
    std::sort(group.begin(), group.end(), [&](std::size_t x, std::size_t y) { return tail[x] > tail[y]; });
    work = 0, inc_sum = 0, inc_max = 0;
    Tick min_release = kInf;
    for (std::size_t i : group) {  // longest tail first: growing prefixes
      work += p[i];
      inc_sum += inc[i];
      inc_max = std::max(inc_max, inc[i]);
      min_release = std::min(min_release, s[i]);
      out = std::max(out, min_release + work + inc_sum - inc_max + tail[i]);
    }
    return out;
  };

  const std::size_t m = problem_.num_agents();
  std::vector<std::vector<std::size_t>> by_agent(m);
  std::vector<std::vector<std::size_t>> by_resource(problem_.resources.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (node.agent[i] >= 0) by_agent[static_cast<std::size_t>(node.agent[i])].push_back(i);
    by_resource[static_cast<std::size_t>(problem_.tasks[i].resource)].push_back(i);
  }
  for (std::size_t a = 0; a < m; ++a) bound = std::max(bound, chain_bound(by_agent[a], true, static_cast<AgentId>(a)));
  for (const auto& group : by_resource) bound = std::max(bound, chain_bound(group, false, 0));

  // Every agent's busy time (processing plus incoming travel) fits in the
  // makespan, so the makespan is at least the largest and the average load.
  auto could_run = [&](std::size_t k, AgentId a) {
    return node.agent[k] == a || (node.agent[k] < 0 && problem_.tasks[k].capable(a));
  };
  auto incoming = [&](std::size_t i, AgentId a) {
    Tick best = st(a, static_cast<TaskId>(i));
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i && could_run(k, a)) best = std::min(best, tt(static_cast<TaskId>(k), static_cast<TaskId>(i), a));
    }
    return best;
  };
  std::vector<Tick> load(m, 0);
  Tick free_work = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (node.agent[i] >= 0) {
      load[static_cast<std::size_t>(node.agent[i])] += p[i] + incoming(i, node.agent[i]);
    } else {
      Tick inc = kInf;
      for (const auto& d : problem_.tasks[i].durations) inc = std::min(inc, incoming(i, d.agent));
      free_work += p[i] + inc;
    }
  }
  Tick total = free_work;
  for (Tick l : load) {
    bound = std::max(bound, l);
    total += l;
  }

  // Travel over all agents forms a spanning tree once the agent starts are
  // merged into one root, so a minimum spanning tree bounds it from below.
  // Per agent the same holds for its start plus its assigned tasks.
  const Tick work = std::accumulate(p.begin(), p.end(), Tick{0});
  auto edge = [&](std::size_t k, std::size_t i) {
    Tick best = kInf;
    for (const auto& a : problem_.agents) {
      if (could_run(k, a.id) && could_run(i, a.id)) best = std::min(best, tt(static_cast<TaskId>(k), static_cast<TaskId>(i), a.id));
    }
    return best;
  };
  auto root_edge = [&](std::size_t i) {
    Tick best = kInf;
    for (const auto& a : problem_.agents) {
      if (could_run(i, a.id)) best = std::min(best, st(a.id, static_cast<TaskId>(i)));
    }
    return best;
  };
  total = std::max(total, work + spanning_tree(n, root_edge, edge));
  for (std::size_t a = 0; a < m; ++a) {
    const auto& group = by_agent[a];
    if (group.empty()) continue;
    const auto ag = static_cast<AgentId>(a);
    Tick agent_work = 0;
    for (std::size_t i : group) agent_work += p[i];
    const Tick tree = spanning_tree(
        group.size(), [&](std::size_t x) { return st(ag, static_cast<TaskId>(group[x])); },
        [&](std::size_t x, std::size_t y) { return tt(static_cast<TaskId>(group[x]), static_cast<TaskId>(group[y]), ag); });
    bound = std::max(bound, agent_work + tree);
  }
  const auto mm = static_cast<Tick>(m);
  bound = std::max(bound, (total + mm - 1) / mm);
  return bound;
}

std::vector<SearchNode> SearchSpace::branch(const SearchNode& node, const NodeEvaluation& ev) const {
  std::vector<SearchNode> children;
  if (!ev.feasible || ev.leaf) return children;
  if (node.assigned < n_) {
    const TaskId t = order_[node.assigned];
    for (const auto& d : problem_.task(t).durations) {
      SearchNode c = node;
      c.agent[static_cast<std::size_t>(t)] = d.agent;
      c.assigned = node.assigned + 1;
      c.hint = ev.start;
      children.push_back(std::move(c));
    }
    return children;
  }
  if (!ev.conflict) return children;
  const auto [i, j] = *ev.conflict;
  for (const auto& pr : {std::make_pair(i, j), std::make_pair(j, i)}) {
    SearchNode c = node;
    c.orders.push_back(pr);
    c.hint = ev.start;
    children.push_back(std::move(c));
  }
  return children;
}

Schedule SearchSpace::schedule_of(const SearchNode& node, const NodeEvaluation& ev) const {
  Schedule s;
  for (std::size_t i = 0; i < n_; ++i) {
    s.entries.push_back({static_cast<TaskId>(i), node.agent[i], ev.start[i], ev.start[i] + ev.duration[i]});
  }
  finalize(s, problem_);
  return s;
}

std::optional<IncumbentUpdate> BnBResult::first_better_than(Tick target) const {
  for (const auto& u : incumbent_trace) {
    if (u.objective < target) return u;
  }
  return std::nullopt;
}

nlohmann::json to_json(const BnBResult& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& u : r.incumbent_trace) trace.push_back({{"node", u.node}, {"objective", u.objective}, {"seconds", u.seconds}});
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"status", r.status},
                      {"objective", r.objective},
                      {"lower_bound", r.lower_bound},
                      {"gap", r.gap},
                      {"nodes_explored", r.nodes_explored},
                      {"wall_time", r.wall_time},
                      {"seeded", r.seeded},
                      {"seed_objective", r.seed_objective ? nlohmann::json(*r.seed_objective) : nlohmann::json()},
                      {"incumbent_trace", trace},
                      {"warnings", r.warnings}};
  j["best_schedule"] = r.best_schedule;
  return j;
}

BnBResult branch_and_bound(const SchedModel& model, const std::optional<Schedule>& seed, const BnBOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  if (!(options.gap_threshold >= 0.0 && options.gap_threshold < 1.0)) {
    throw std::invalid_argument("gap_threshold must lie in [0, 1)");
  }

  const ProblemInstance& problem = model.problem;
  const SearchSpace space(problem);
  BnBResult res;
  Tick incumbent = kInf;
  if (seed) {
    const auto report = validate_schedule(problem, *seed);
    if (seed->complete && report.feasible()) {
      res.seeded = true;
      res.seed_objective = makespan(*seed);
      incumbent = *res.seed_objective;
      res.best_schedule = *seed;
    } else {
      res.warnings.push_back("seed rejected: " + std::string(seed->complete ? "infeasible" : "incomplete") +
                             " schedule, running unseeded");
    }
  }
  auto prune_level = [&](Tick inc) {
    if (inc >= kInf) return kInf;
    return static_cast<Tick>(std::ceil(static_cast<double>(inc) * (1.0 - options.gap_threshold) - 1e-9));
  };

  struct Entry {
    SearchNode node;
    NodeEvaluation eval;
  };
  std::vector<Entry> stack;
  {
    SearchNode root = space.root();
    NodeEvaluation ev = space.evaluate(root);
    if (ev.feasible) stack.push_back({std::move(root), std::move(ev)});
  }
  Tick pruned_min = kInf;
  std::string status = "optimal";
  while (!stack.empty()) {
    Entry e = std::move(stack.back());
    stack.pop_back();
    if (e.eval.bound >= prune_level(incumbent)) {
      pruned_min = std::min(pruned_min, e.eval.bound);
      continue;
    }
    if (res.nodes_explored >= options.node_limit) {
      stack.push_back(std::move(e));
      status = "node_limit";
      break;
    }
    if ((res.nodes_explored & 255U) == 0 && elapsed() > options.time_limit) {
      stack.push_back(std::move(e));
      status = "time_limit";
      break;
    }
    ++res.nodes_explored;
    if (e.eval.leaf) {
      if (e.eval.value < incumbent) {
        incumbent = e.eval.value;
        res.best_schedule = space.schedule_of(e.node, e.eval);
        if (!validate_schedule(problem, res.best_schedule).feasible()) {
          throw std::logic_error("search produced an infeasible leaf schedule");
        }
        res.incumbent_trace.push_back({res.nodes_explored, incumbent, elapsed()});
      }
      continue;
    }
    std::vector<Entry> kids;
    for (auto& c : space.branch(e.node, e.eval)) {
      NodeEvaluation ev = space.evaluate(c);
      if (ev.feasible) kids.push_back({std::move(c), std::move(ev)});
    }
    std::stable_sort(kids.begin(), kids.end(), [](const Entry& a, const Entry& b) { return a.eval.bound < b.eval.bound; });
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
  }

  Tick lb = std::min(incumbent, pruned_min);
  for (const auto& e : stack) lb = std::min(lb, e.eval.bound);
  res.wall_time = elapsed();
  if (incumbent >= kInf) {
    res.status = status == "optimal" ? "infeasible" : status;
    res.objective = 0;
    res.lower_bound = lb >= kInf ? 0 : lb;
    res.gap = 0.0;
    return res;
  }
  res.status = status;
  res.objective = incumbent;
  res.lower_bound = lb;
  res.gap = incumbent > 0 ? static_cast<double>(incumbent - lb) / static_cast<double>(incumbent) : 0.0;
  return res;
}

}  // namespace apsched
