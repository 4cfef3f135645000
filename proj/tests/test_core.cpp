#include <random>

#include "doctest.h"

#include "apsched/json_io.hpp"
#include "apsched/problem.hpp"
#include "apsched/sim_state.hpp"
#include "apsched/synthetic.hpp"
#include "apsched/validate.hpp"
#include "test_util.hpp"

using namespace apsched;
using testutil::Builder;

TEST_CASE("travel ticks round up") {
  CHECK(travel_ticks(0.0, 1.0) == 0);
  CHECK(travel_ticks(10.0, 1.0) == 10);
  CHECK(travel_ticks(5.0, 2.0) == 3);
  CHECK(travel_ticks(std::hypot(3.0, 4.0), 1.0) == 5);
  CHECK(travel_ticks(1.0, 3.0) == 1);
}

TEST_CASE("is_alive_enabled follows finish plus wait") {
  Builder b({{0, 0}});
  b.add_task({0, 0}, 3);
  b.add_task({0, 0}, 2).waits.push_back({0, 5});
  const auto p = b.build();
  SimState s = SimState::initial(p);
  CHECK(is_alive_enabled(p, s, p.tasks[0]));
  s.time = 100;
  CHECK_FALSE(is_alive_enabled(p, s, p.tasks[1]));  // predecessor unfinished
  s.finished[0] = 3;
  s.time = 7;
  CHECK_FALSE(is_alive_enabled(p, s, p.tasks[1]));
  s.time = 8;
  CHECK(is_alive_enabled(p, s, p.tasks[1]));
}

TEST_CASE("agent_can_reach uses ceil(distance / speed)") {
  Builder b({{0, 0}}, 1.0);
  b.add_task({10, 0}, 1);
  b.add_task({0, 0}, 1);
  const auto p = b.build();
  SimState s = SimState::initial(p);
  CHECK(agent_can_reach(s, p.agents[0], p.tasks[1]));
  s.time = 9;
  CHECK_FALSE(agent_can_reach(s, p.agents[0], p.tasks[0]));
  s.time = 10;
  CHECK(agent_can_reach(s, p.agents[0], p.tasks[0]));

  Builder fast({{0, 0}}, 2.0);
  fast.add_task({5, 0}, 1);
  const auto q = fast.build();
  SimState t = SimState::initial(q);
  t.time = 2;
  CHECK_FALSE(agent_can_reach(t, q.agents[0], q.tasks[0]));
  t.time = 3;
  CHECK(agent_can_reach(t, q.agents[0], q.tasks[0]));
}

TEST_CASE("apply_action books agent and resource") {
  Builder b({{0, 0}, {0, 0}}, 1.0, 100, 2);
  b.add_task({0, 0}, 4, 0);
  b.add_task({0, 0}, 3, 0);
  b.add_task({0, 0}, 3, 1);
  const auto p = b.build();
  SimState s = SimState::initial(p);
  s.advance_to(2);
  const SimState s1 = apply_action(p, s, 0, 0);
  CHECK(s1.agent_busy_until[0] == 6);
  CHECK(s1.resource_busy_until[0] == 6);
  CHECK_THROWS_AS(apply_action(p, s1, 1, 1), InfeasibleAction);  // resource busy
  const SimState s2 = apply_action(p, s1, 2, 1);                 // other resource
  CHECK(s2.started[2]->agent == 1);
  CHECK(s2.started[0]->start == 2);
  CHECK(s2.started[2]->start == 2);
  CHECK(validate_schedule(p, induced_schedule(p, s2)).count(ViolationKind::ResourceOverlap) == 0);
}

TEST_CASE("effective deadline takes the earliest bound in force") {
  Builder b({{0, 0}}, 1.0, 50);
  b.add_task({0, 0}, 2);
  auto& t = b.add_task({0, 0}, 2, 0, 40);
  t.rel_deadlines.push_back({0, 10});
  const auto p = b.build();
  SimState s = SimState::initial(p);
  CHECK(effective_deadline(p, s, p.tasks[0]) == 50);
  CHECK(effective_deadline(p, s, p.tasks[1]) == 40);
  s = apply_action(p, s, 0, 0);
  CHECK(effective_deadline(p, s, p.tasks[1]) == 10);
}

TEST_CASE("makespan examples") {
  Builder b({{0, 0}});
  b.add_task({0, 0}, 4);
  b.add_task({0, 0}, 3);
  const auto p = b.build();
  CHECK(makespan(Schedule{}) == 0);
  Schedule one;
  one.entries = {{0, 0, 2, 6}};
  CHECK(makespan(one) == 6);
  Schedule two;
  two.entries = {{0, 0, 2, 6}, {1, 0, 6, 9}};
  CHECK(makespan(two) == 9);
}

TEST_CASE("validate_schedule reports each violation kind") {
  Schedule empty;
  empty.complete = true;
  CHECK(validate_schedule(ProblemInstance{}, empty).feasible());

  Builder b({{0, 0}, {0, 0}}, 1.0, 30, 2);
  b.add_task({0, 0}, 4, 0, 5);
  b.add_task({3, 0}, 2, 0);
  b.add_task({0, 0}, 2, 1).waits.push_back({0, 2});
  b.p.tasks[2].rel_deadlines.push_back({0, 8});
  const auto p = b.build();

  auto report_for = [&](std::vector<ScheduleEntry> e) { return validate_schedule(p, testutil::make_schedule(p, e)); };

  CHECK(report_for({{0, 0, 0, 4}, {1, 0, 7, 9}, {2, 1, 6, 8}}).feasible());
  CHECK(report_for({{0, 0, 2, 6}, {1, 0, 9, 11}, {2, 1, 8, 10}}).count(ViolationKind::AbsoluteDeadline) == 1);
  CHECK(report_for({{0, 0, 0, 4}, {1, 1, 3, 5}, {2, 1, 6, 8}}).count(ViolationKind::ResourceOverlap) == 1);
  CHECK(report_for({{0, 0, 0, 4}, {1, 0, 5, 7}, {2, 1, 6, 8}}).count(ViolationKind::Reachability) == 1);
  CHECK(report_for({{0, 0, 0, 4}, {1, 0, 7, 9}, {2, 1, 5, 7}}).count(ViolationKind::Wait) == 1);
  CHECK(report_for({{0, 0, 0, 4}, {1, 0, 7, 9}, {2, 1, 7, 9}}).count(ViolationKind::RelativeDeadline) == 1);
  CHECK(report_for({{0, 0, 0, 4}, {1, 0, 7, 10}, {2, 1, 6, 8}}).count(ViolationKind::DurationMismatch) == 1);
  CHECK(report_for({{0, 0, 0, 4}, {1, 1, 4, 6}, {2, 1, 5, 7}}).count(ViolationKind::AgentOverlap) == 1);
  CHECK(report_for({{0, 0, 0, 4}, {2, 1, 6, 8}}).feasible());  // partial schedules stay partial
  Schedule lying = testutil::make_schedule(p, {{0, 0, 0, 4}, {2, 1, 6, 8}});
  lying.complete = true;
  CHECK(validate_schedule(p, lying).count(ViolationKind::Coverage) == 1);
}

namespace {

// Independent replay of a schedule: every pairwise rule checked directly.
bool replay_feasible(const ProblemInstance& p, const Schedule& s) {
  if (!s.complete || s.entries.size() != p.num_tasks()) return false;
  std::vector<ScheduleEntry> by(p.num_tasks());
  for (const auto& e : s.entries) by[static_cast<std::size_t>(e.task)] = e;
  for (std::size_t i = 0; i < by.size(); ++i) {
    const auto& e = by[i];
    const auto& t = p.tasks[i];
    const auto& a = p.agents[static_cast<std::size_t>(e.agent)];
    if (e.finish - e.start != *t.duration_for(e.agent) || e.finish > p.horizon) return false;
    if (t.abs_deadline && e.finish > *t.abs_deadline) return false;
    if (e.start < testutil::ticks_between(a.start_location, t.location, a.speed)) return false;
    for (const auto& w : t.waits) {
      if (e.start < by[static_cast<std::size_t>(w.predecessor)].finish + w.ticks) return false;
    }
    for (const auto& r : t.rel_deadlines) {
      if (e.finish - by[static_cast<std::size_t>(r.anchor)].start > r.bound) return false;
    }
    for (std::size_t j = 0; j < by.size(); ++j) {
      if (j == i) continue;
      const auto& f = by[j];
      const bool overlap = e.start < f.finish && f.start < e.finish;
      if (overlap && t.resource == p.tasks[j].resource) return false;
      if (e.agent == f.agent && e.start <= f.start &&
          e.finish + testutil::ticks_between(t.location, p.tasks[j].location, a.speed) > f.start) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("mock expert schedules pass both the validator and an independent replay") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GenConfig c;
    c.num_tasks = 12;
    c.rng_seed = seed;
    const auto p = generate_instance(c);
    const Schedule s = demonstrated_schedule(demonstrate(p, 0.0, seed));
    CHECK(validate_schedule(p, s).feasible());
    CHECK(replay_feasible(p, s));
  }
}

TEST_CASE("random action trajectories induce feasible schedules") {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenConfig c;
    c.num_tasks = 10;
    c.fraction_with_deadlines = 0.0;
    c.fraction_relative = 0.0;
    c.rng_seed = seed;
    const auto p = generate_instance(c);
    SimState s = SimState::initial(p);
    SimState twin = s;
    std::vector<std::pair<TaskId, AgentId>> actions;
    while (!s.all_started() && s.time <= p.horizon) {
      for (const auto& a : p.agents) {
        if (!s.agent_idle(a.id)) continue;
        const auto cands = feasible_candidates(p, s, a.id);
        if (cands.empty()) continue;
        const TaskId t = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
        s = apply_action(p, s, t, a.id);
      }
      s.advance_to(s.time + 1);
    }
    const Schedule sched = induced_schedule(p, s);
    CHECK(validate_schedule(p, sched).feasible());
    // Makespan is at least every task's reach time plus duration.
    Tick floor = 0;
    for (const auto& e : sched.entries) {
      const auto& a = p.agents[static_cast<std::size_t>(e.agent)];
      const auto& t = p.tasks[static_cast<std::size_t>(e.task)];
      floor = std::max(floor, travel_ticks(distance(a.start_location, t.location), a.speed) + (e.finish - e.start));
    }
    CHECK(makespan(sched) >= floor);
    // Replaying the same actions reproduces the same state.
    for (const auto& e : sched.entries) actions.push_back({e.task, e.agent});
    std::sort(actions.begin(), actions.end(), [&](auto x, auto y) {
      return s.started[x.first]->start < s.started[y.first]->start ||
             (s.started[x.first]->start == s.started[y.first]->start && x.first < y.first);
    });
    for (const auto& [t, a] : actions) {
      twin.advance_to(s.started[static_cast<std::size_t>(t)]->start);
      twin = apply_action(p, twin, t, a);
    }
    twin.advance_to(s.time);
    CHECK(twin == s);
  }
}

TEST_CASE("is_alive_enabled is monotone in time") {
  Builder b({{0, 0}});
  b.add_task({0, 0}, 3);
  b.add_task({0, 0}, 2).waits.push_back({0, 4});
  const auto p = b.build();
  SimState s = SimState::initial(p);
  s.finished[0] = 3;
  bool seen = false;
  for (Tick t = 0; t < 30; ++t) {
    s.time = t;
    const bool now = is_alive_enabled(p, s, p.tasks[1]);
    if (seen) CHECK(now);
    seen = seen || now;
  }
  CHECK(seen);
}

TEST_CASE("structural errors") {
  Builder b({{0, 0}});
  b.add_task({0, 0}, 1).waits.push_back({1, 0});
  b.add_task({0, 0}, 1).waits.push_back({0, 0});
  CHECK_THROWS_AS(b.build(), StructuralError);

  Builder c({{0, 0}});
  c.add_task({0, 0}, 1);
  c.p.tasks[0].id = 3;
  CHECK_THROWS_AS(c.build(), StructuralError);

  Builder d({{0, 0}});
  d.add_task({0, 0}, 1).waits.push_back({5, 0});
  CHECK_THROWS_AS(d.build(), StructuralError);
}

TEST_CASE("JSON round trips and schema checks") {
  GenConfig c;
  c.num_tasks = 8;
  c.rng_seed = 3;
  const auto p = generate_instance(c);
  const json pj = p;
  CHECK(pj.at("schema_version") == "v1");
  CHECK(pj.get<ProblemInstance>() == p);

  const Demonstration d = demonstrate(p, 0.1, 9);
  const json dj = d;
  CHECK(dj.get<Demonstration>() == d);

  const Schedule s = demonstrated_schedule(d);
  const json sj = s;
  CHECK(sj.get<Schedule>() == s);

  json bad = pj;
  bad["schema_version"] = "v0";
  CHECK_THROWS(bad.get<ProblemInstance>());
  bad.erase("schema_version");
  CHECK_THROWS(bad.get<ProblemInstance>());
}
