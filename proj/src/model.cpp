#include "apsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace apsched {

bool LinearConstraint::satisfied(const std::vector<double>& values, double tol) const {
  double lhs = 0.0;
  for (const auto& [v, c] : terms) lhs += c * values[static_cast<std::size_t>(v)];
  switch (sense) {
    case Sense::LessEqual: return lhs <= rhs + tol;
    case Sense::GreaterEqual: return lhs >= rhs - tol;
    case Sense::Equal: return std::abs(lhs - rhs) <= tol;
  }
  return false;
}

std::size_t SchedModel::num_binaries() const {
  return static_cast<std::size_t>(std::count_if(variables.begin(), variables.end(), [](const ModelVariable& v) {
    return v.kind == ModelVariable::Kind::Binary;
  }));
}

Tick SchedModel::travel(TaskId from, TaskId to, AgentId agent) const {
  return travel_ticks(distance(problem.task(from).location, problem.task(to).location), problem.agent(agent).speed);
}

Tick SchedModel::start_travel(AgentId agent, TaskId to) const {
  const auto& a = problem.agent(agent);
  return travel_ticks(distance(a.start_location, problem.task(to).location), a.speed);
}

SchedModel formulate(const ProblemInstance& problem) {
  problem.check();
  SchedModel m;
  m.problem = problem;
  const auto n = problem.num_tasks();
  const auto H = static_cast<double>(problem.horizon);
  auto add_var = [&](std::string name, ModelVariable::Kind kind, double lo, double hi) {
    m.variables.push_back({std::move(name), kind, lo, hi});
    return static_cast<int>(m.variables.size()) - 1;
  };
  using Sense = LinearConstraint::Sense;
  auto add_row = [&](std::string name, std::vector<std::pair<int, double>> terms, Sense sense, double rhs) {
    m.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
  };

  Tick max_travel = 0;
  for (const auto& a : problem.agents) {
    for (const auto& t : problem.tasks) {
      max_travel = std::max(max_travel, travel_ticks(distance(a.start_location, t.location), a.speed));
      for (const auto& u : problem.tasks) {
        max_travel = std::max(max_travel, travel_ticks(distance(t.location, u.location), a.speed));
      }
    }
  }
  m.big_m = H + static_cast<double>(max_travel);
  const double M = m.big_m;

  m.x.assign(n, std::vector<int>(problem.num_agents(), -1));
  for (const auto& t : problem.tasks) {
    for (const auto& d : t.durations) {
      m.x[static_cast<std::size_t>(t.id)][static_cast<std::size_t>(d.agent)] =
          add_var("x_" + std::to_string(t.id) + "_" + std::to_string(d.agent), ModelVariable::Kind::Binary, 0, 1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    m.s.push_back(add_var("s_" + std::to_string(i), ModelVariable::Kind::Continuous, 0, H));
    m.f.push_back(add_var("f_" + std::to_string(i), ModelVariable::Kind::Continuous, 0, H));
  }
  m.makespan = add_var("C", ModelVariable::Kind::Continuous, 0, H);

  for (const auto& t : problem.tasks) {
    const auto i = static_cast<std::size_t>(t.id);
    const std::string tag = std::to_string(t.id);
    std::vector<std::pair<int, double>> assign, dur{{m.f[i], 1.0}, {m.s[i], -1.0}};
    for (const auto& d : t.durations) {
      const int xv = m.x[i][static_cast<std::size_t>(d.agent)];
      assign.push_back({xv, 1.0});
      dur.push_back({xv, -static_cast<double>(d.ticks)});
      add_row("reach_" + tag + "_" + std::to_string(d.agent),
              {{m.s[i], 1.0}, {xv, -static_cast<double>(m.start_travel(d.agent, t.id))}}, Sense::GreaterEqual, 0.0);
    }
    add_row("assign_" + tag, assign, Sense::Equal, 1.0);
    add_row("duration_" + tag, dur, Sense::Equal, 0.0);
    add_row("horizon_" + tag, {{m.f[i], 1.0}}, Sense::LessEqual, H);
    add_row("makespan_" + tag, {{m.makespan, 1.0}, {m.f[i], -1.0}}, Sense::GreaterEqual, 0.0);
    if (t.abs_deadline) {
      add_row("deadline_" + tag, {{m.f[i], 1.0}}, Sense::LessEqual, static_cast<double>(*t.abs_deadline));
    }
    for (const auto& w : t.waits) {
      add_row("wait_" + std::to_string(w.predecessor) + "_" + tag,
              {{m.s[i], 1.0}, {m.f[static_cast<std::size_t>(w.predecessor)], -1.0}}, Sense::GreaterEqual,
              static_cast<double>(w.ticks));
    }
    for (const auto& r : t.rel_deadlines) {
      add_row("reldeadline_" + std::to_string(r.anchor) + "_" + tag,
              {{m.f[i], 1.0}, {m.s[static_cast<std::size_t>(r.anchor)], -1.0}}, Sense::LessEqual,
              static_cast<double>(r.bound));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& ti = problem.tasks[i];
      const auto& tj = problem.tasks[j];
      std::vector<AgentId> shared_agents;
      for (const auto& d : ti.durations) {
        if (tj.capable(d.agent)) shared_agents.push_back(d.agent);
      }
      const bool shared_resource = ti.resource == tj.resource;
      if (!shared_resource && shared_agents.empty()) continue;
      const std::string tag = std::to_string(i) + "_" + std::to_string(j);
      const int yv = add_var("y_" + tag, ModelVariable::Kind::Binary, 0, 1);
      m.y[{static_cast<TaskId>(i), static_cast<TaskId>(j)}] = yv;
      if (shared_resource) {
        // y = 1: i before j; y = 0: j before i.
        add_row("resource_" + tag, {{m.s[j], 1.0}, {m.f[i], -1.0}, {yv, -M}}, Sense::GreaterEqual, -M);
        add_row("resource_" + std::to_string(j) + "_" + std::to_string(i), {{m.s[i], 1.0}, {m.f[j], -1.0}, {yv, M}},
                Sense::GreaterEqual, 0.0);
      }
      for (AgentId a : shared_agents) {
        const int xi = m.x[i][static_cast<std::size_t>(a)];
        const int xj = m.x[j][static_cast<std::size_t>(a)];
        const auto tij = static_cast<double>(m.travel(ti.id, tj.id, a));
        const auto tji = static_cast<double>(m.travel(tj.id, ti.id, a));
        const std::string at = "_a" + std::to_string(a);
        add_row("agent_" + tag + at, {{m.s[j], 1.0}, {m.f[i], -1.0}, {yv, -M}, {xi, -M}, {xj, -M}},
                Sense::GreaterEqual, tij - 3 * M);
        add_row("agent_" + std::to_string(j) + "_" + std::to_string(i) + at,
                {{m.s[i], 1.0}, {m.f[j], -1.0}, {yv, M}, {xi, -M}, {xj, -M}}, Sense::GreaterEqual, tji - 2 * M);
      }
    }
  }
  return m;
}

bool model_accepts(const SchedModel& model, const Schedule& schedule) {
  const auto& p = model.problem;
  std::vector<double> values(model.variables.size(), 0.0);
  std::set<TaskId> seen;
  for (const auto& e : schedule.entries) {
    if (e.task < 0 || static_cast<std::size_t>(e.task) >= p.num_tasks() || !seen.insert(e.task).second) return false;
    if (e.agent < 0 || static_cast<std::size_t>(e.agent) >= p.num_agents()) return false;
    const int xv = model.x[static_cast<std::size_t>(e.task)][static_cast<std::size_t>(e.agent)];
    if (xv < 0) return false;
    values[static_cast<std::size_t>(xv)] = 1.0;
    values[static_cast<std::size_t>(model.s[static_cast<std::size_t>(e.task)])] = static_cast<double>(e.start);
    values[static_cast<std::size_t>(model.f[static_cast<std::size_t>(e.task)])] = static_cast<double>(e.finish);
  }
  if (seen.size() != p.num_tasks()) return false;
  values[static_cast<std::size_t>(model.makespan)] = static_cast<double>(makespan(schedule));

  std::map<int, std::vector<const LinearConstraint*>> rows_of_y;
  std::vector<char> is_y(model.variables.size(), 0);
  for (const auto& [key, yv] : model.y) is_y[static_cast<std::size_t>(yv)] = 1;
  for (const auto& row : model.constraints) {
    for (const auto& [v, c] : row.terms) {
      if (is_y[static_cast<std::size_t>(v)]) rows_of_y[v].push_back(&row);
    }
  }
  for (const auto& [yv, rows] : rows_of_y) {
    bool ok = false;
    for (double choice : {1.0, 0.0}) {
      values[static_cast<std::size_t>(yv)] = choice;
      if (std::all_of(rows.begin(), rows.end(), [&](const LinearConstraint* r) { return r->satisfied(values); })) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const auto& var = model.variables[v];
    if (values[v] < var.lower - 1e-6 || values[v] > var.upper + 1e-6) return false;
  }
  return std::all_of(model.constraints.begin(), model.constraints.end(),
                     [&](const LinearConstraint& r) { return r.satisfied(values); });
}

}  // namespace apsched
