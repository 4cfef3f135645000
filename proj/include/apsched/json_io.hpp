#ifndef APSCHED_JSON_IO_HPP
#define APSCHED_JSON_IO_HPP

#include <filesystem>
#include <string>

#include "json.hpp"

#include "apsched/problem.hpp"
#include "apsched/synthetic.hpp"
#include "apsched/validate.hpp"

namespace apsched {

inline constexpr const char* kSchemaVersion = "v1";

using nlohmann::json;

void to_json(json& j, const Point& p);
void from_json(const json& j, Point& p);
void to_json(json& j, const TaskSpec& t);
void from_json(const json& j, TaskSpec& t);
void to_json(json& j, const AgentSpec& a);
void from_json(const json& j, AgentSpec& a);
void to_json(json& j, const ProblemInstance& p);
void from_json(const json& j, ProblemInstance& p);
void to_json(json& j, const ScheduleEntry& e);
void from_json(const json& j, ScheduleEntry& e);
void to_json(json& j, const Schedule& s);
void from_json(const json& j, Schedule& s);
void to_json(json& j, const FeasibilityReport& r);
void to_json(json& j, const Observation& o);
void from_json(const json& j, Observation& o);
/// The problem is embedded inline.
void to_json(json& j, const Demonstration& d);
void from_json(const json& j, Demonstration& d);

/// Rejects documents whose "schema_version" is missing or not "v1".
void require_schema(const json& j, const std::string& what);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace apsched

#endif  // APSCHED_JSON_IO_HPP
