#include "apsched/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace apsched {

void to_json(json& j, const Point& p) { j = json::array({p.x, p.y}); }

void from_json(const json& j, Point& p) {
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

void to_json(json& j, const TaskSpec& t) {
  json durations = json::array();
  for (const auto& d : t.durations) durations.push_back({{"agent", d.agent}, {"ticks", d.ticks}});
  json rel = json::array();
  for (const auto& r : t.rel_deadlines) rel.push_back({{"anchor", r.anchor}, {"bound", r.bound}});
  json waits = json::array();
  for (const auto& w : t.waits) waits.push_back({{"predecessor", w.predecessor}, {"ticks", w.ticks}});
  j = {{"id", t.id},
       {"location", t.location},
       {"durations", durations},
       {"resource", t.resource},
       {"abs_deadline", t.abs_deadline ? json(*t.abs_deadline) : json(nullptr)},
       {"rel_deadlines", rel},
       {"waits", waits}};
}

void from_json(const json& j, TaskSpec& t) {
  t.id = j.at("id").get<TaskId>();
  t.location = j.at("location").get<Point>();
  t.durations.clear();
  for (const auto& d : j.at("durations")) {
    t.durations.push_back({d.at("agent").get<AgentId>(), d.at("ticks").get<Tick>()});
  }
  t.resource = j.at("resource").get<ResourceId>();
  const auto& dl = j.at("abs_deadline");
  t.abs_deadline = dl.is_null() ? std::nullopt : std::optional<Tick>(dl.get<Tick>());
  t.rel_deadlines.clear();
  for (const auto& r : j.value("rel_deadlines", json::array())) {
    t.rel_deadlines.push_back({r.at("anchor").get<TaskId>(), r.at("bound").get<Tick>()});
  }
  t.waits.clear();
  for (const auto& w : j.value("waits", json::array())) {
    t.waits.push_back({w.at("predecessor").get<TaskId>(), w.at("ticks").get<Tick>()});
  }
}

void to_json(json& j, const AgentSpec& a) {
  j = {{"id", a.id}, {"start_location", a.start_location}, {"speed", a.speed}};
}

void from_json(const json& j, AgentSpec& a) {
  a.id = j.at("id").get<AgentId>();
  a.start_location = j.at("start_location").get<Point>();
  a.speed = j.at("speed").get<double>();
}

void to_json(json& j, const ProblemInstance& p) {
  j = {{"schema_version", kSchemaVersion},
       {"grid_size", {p.grid_size.width, p.grid_size.height}},
       {"horizon", p.horizon},
       {"resources", p.resources},
       {"agents", p.agents},
       {"tasks", p.tasks}};
}

void from_json(const json& j, ProblemInstance& p) {
  require_schema(j, "problem");
  p.grid_size = {j.at("grid_size").at(0).get<int>(), j.at("grid_size").at(1).get<int>()};
  p.horizon = j.at("horizon").get<Tick>();
  p.resources = j.at("resources").get<std::vector<ResourceId>>();
  p.agents = j.at("agents").get<std::vector<AgentSpec>>();
  p.tasks = j.at("tasks").get<std::vector<TaskSpec>>();
  p.check();
}

void to_json(json& j, const ScheduleEntry& e) {
  j = {{"task", e.task}, {"agent", e.agent}, {"start", e.start}, {"finish", e.finish}};
}

void from_json(const json& j, ScheduleEntry& e) {
  e.task = j.at("task").get<TaskId>();
  e.agent = j.at("agent").get<AgentId>();
  e.start = j.at("start").get<Tick>();
  e.finish = j.at("finish").get<Tick>();
}

void to_json(json& j, const Schedule& s) {
  j = {{"schema_version", kSchemaVersion},
       {"entries", s.entries},
       {"objective", s.objective},
       {"complete", s.complete}};
}

void from_json(const json& j, Schedule& s) {
  require_schema(j, "schedule");
  s.entries = j.at("entries").get<std::vector<ScheduleEntry>>();
  s.objective = j.at("objective").get<Tick>();
  s.complete = j.at("complete").get<bool>();
}

void to_json(json& j, const FeasibilityReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"kind", to_string(v.kind)}, {"tasks", v.tasks}, {"detail", v.detail}});
  }
  j = {{"feasible", r.feasible()}, {"violations", violations}};
}

void require_schema(const json& j, const std::string& what) {
  if (!j.contains("schema_version") || j.at("schema_version") != kSchemaVersion) {
    throw std::runtime_error(what + ": unsupported or missing schema_version (expected v1)");
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void to_json(json& j, const Observation& o) {
  json tasks = json::array();
  for (const auto& t : o.tasks) tasks.push_back({{"id", t.id}, {"features", t.features.values}});
  j = {{"tick", o.tick},
       {"agent", o.agent},
       {"context", o.context.values},
       {"tasks", tasks},
       {"scheduled", o.scheduled ? json({{"task", o.scheduled->task}, {"agent", o.scheduled->agent}}) : json(nullptr)},
       {"rule_choice", o.rule_choice ? json(*o.rule_choice) : json(nullptr)},
       {"num_candidates", o.num_candidates}};
}

void from_json(const json& j, Observation& o) {
  o.tick = j.at("tick").get<Tick>();
  o.agent = j.at("agent").get<AgentId>();
  o.context.values = j.at("context").get<std::array<double, kNumContextFeatures>>();
  o.tasks.clear();
  for (const auto& t : j.at("tasks")) {
    ObservedTask ot;
    ot.id = t.at("id").get<TaskId>();
    ot.features.values = t.at("features").get<std::array<double, kNumTaskFeatures>>();
    o.tasks.push_back(ot);
  }
  const auto& sch = j.at("scheduled");
  o.scheduled.reset();
  if (!sch.is_null()) o.scheduled = ScheduledAction{sch.at("task").get<TaskId>(), sch.at("agent").get<AgentId>()};
  const auto& rc = j.value("rule_choice", json(nullptr));
  o.rule_choice = rc.is_null() ? std::nullopt : std::optional<TaskId>(rc.get<TaskId>());
  o.num_candidates = j.value("num_candidates", 0);
}

void to_json(json& j, const Demonstration& d) {
  j = {{"schema_version", kSchemaVersion},
       {"problem", d.problem},
       {"rule_used", to_string(d.rule_used)},
       {"epsilon", d.epsilon},
       {"rng_seed", d.rng_seed},
       {"feature_schema", kFeatureSchema},
       {"observations", d.observations}};
}

void from_json(const json& j, Demonstration& d) {
  require_schema(j, "demonstration");
  if (j.value("feature_schema", std::string()) != kFeatureSchema) {
    throw std::invalid_argument("demonstration: unsupported feature schema");
  }
  d.problem = j.at("problem").get<ProblemInstance>();
  d.rule_used = rule_kind_from_string(j.at("rule_used").get<std::string>());
  d.epsilon = j.at("epsilon").get<double>();
  d.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  d.observations = j.at("observations").get<std::vector<Observation>>();
}

}  // namespace apsched
