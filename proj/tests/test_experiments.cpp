#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"

#include "apsched/experiments.hpp"

using namespace apsched;

namespace {

ExperimentSpec small_spec(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  s.demo_counts = {6};
  s.epsilons = {0.0};
  s.replicates = 1;
  s.master_seed = 3;
  return s;
}

std::string csv_of(const Report& r) {
  std::ostringstream out;
  write_rows_csv(r.rows, out);
  return out.str();
}

std::string strip_method(const std::string& cond) {
  const auto pos = cond.find(";method=");
  return pos == std::string::npos ? cond : cond.substr(0, pos);
}

}  // namespace

TEST_CASE("accuracy sweep emits per-condition metrics and reruns byte for byte") {
  const auto spec = small_spec(ExperimentKind::AccuracySweep);
  const Report a = run_accuracy_sweep(spec);
  CHECK(a.experiment == "accuracy_sweep");
  CHECK(a.rows.size() >= 2);
  std::set<std::string> metrics;
  for (const auto& r : a.rows) {
    CHECK(r.condition == "demos=6;epsilon=0");
    metrics.insert(r.metric);
  }
  CHECK(metrics.count("sensitivity") == 1);
  CHECK(metrics.count("specificity") == 1);
  CHECK(csv_of(run_experiment(spec)) == csv_of(a));

  auto other = spec;
  other.master_seed = 4;
  CHECK(csv_of(run_accuracy_sweep(other)) != csv_of(a));
}

TEST_CASE("baseline comparison pairs methods on shared data") {
  auto spec = small_spec(ExperimentKind::BaselineComparison);
  spec.replicates = 2;
  const Report r = run_baseline_comparison(spec);
  std::map<std::pair<std::string, int>, int> per_condition;
  std::map<std::pair<std::string, int>, std::set<std::uint64_t>> seeds;
  std::set<std::string> methods;
  for (const auto& row : r.rows) {
    if (row.metric != "sensitivity" && row.metric != "specificity") continue;
    const auto key = std::make_pair(strip_method(row.condition), row.replicate);
    ++per_condition[key];
    seeds[key].insert(row.seed);
    methods.insert(row.condition.substr(row.condition.find(";method=") + 8));
  }
  CHECK(methods == std::set<std::string>{"naive", "pairwise", "pointwise"});
  CHECK(per_condition.size() == 2);
  for (const auto& [k, n] : per_condition) CHECK(n == 6);
  for (const auto& [k, s] : seeds) CHECK(s.size() == 1);
}

TEST_CASE("hyperparameter tuning compares tuned and untuned trees") {
  auto spec = small_spec(ExperimentKind::HyperparameterTuning);
  spec.demo_counts = {8};
  const Report r = run_hyperparameter_tuning(spec);
  std::set<std::string> conds;
  for (const auto& row : r.rows) conds.insert(row.condition);
  CHECK(conds == std::set<std::string>{"demos=8;epsilon=0;tuning=tuned", "demos=8;epsilon=0;tuning=untuned"});
  for (const auto& row : r.rows) {
    if (row.condition.ends_with("untuned") && row.metric == "priority_min_leaf") CHECK(row.value == 1.0);
  }
}

TEST_CASE("covas benchmark on a couple of instances") {
  auto spec = small_spec(ExperimentKind::CovasBenchmark);
  spec.num_instances = 2;
  spec.instance_tasks = {6};
  spec.train_tasks = 6;
  spec.train_demos = 8;
  const Report r = run_covas_benchmark(spec);
  std::set<std::string> items;
  for (const auto& row : r.rows) {
    if (row.condition.starts_with("train_tasks=")) continue;  // policy training rows
    items.insert(row.item);
    CHECK(row.condition == "tasks=6;train_tasks=6");
    if (row.metric == "nodes_cold" || row.metric == "nodes_seeded") CHECK(row.value.value() >= 1.0);
    if (row.metric == "seed_ratio" && row.value) CHECK(*row.value >= 1.0);
  }
  CHECK(items == std::set<std::string>{"instance=0", "instance=1"});
  CHECK_FALSE(r.timing.empty());
  CHECK(csv_of(run_covas_benchmark(spec)) == csv_of(r));
}

TEST_CASE("sensitivity grid plan") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::SensitivityGrid;
  spec.problems_per_cell = 2;
  spec.replicates = 1;
  const auto plan = plan_sensitivity_grid(spec);
  CHECK(count_grid_cells(plan) == 27);
  std::size_t perturbed = 0, controls = 0;
  for (const auto& g : plan) (g.kind ? perturbed : controls) += 1;
  CHECK(perturbed == 27 * 2);
  CHECK(controls == 3 * 2);

  spec.paper_scale = true;
  const auto full = plan_sensitivity_grid(spec);
  CHECK(count_grid_cells(full) == 27);
  perturbed = 0;
  for (const auto& g : full) perturbed += g.kind.has_value();
  CHECK(perturbed == 2025);

  spec.paper_scale = false;
  spec.include_controls = false;
  for (const auto& g : plan_sensitivity_grid(spec)) CHECK(g.kind.has_value());

  GridPoint g;
  g.type = ProblemType::TravelDistance;
  g.kind = PerturbKind::Swap;
  g.count = 2;
  CHECK(g.condition() == "type=travel_distance;kind=swap;count=2");
}

TEST_CASE("sensitivity grid controls reproduce the reference schedule") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::SensitivityGrid;
  spec.problems_per_cell = 1;
  spec.replicates = 1;
  spec.grid_tasks = 10;
  spec.train_demos = 6;
  spec.bnb.node_limit = 2000;
  const Report r = run_sensitivity_grid(spec);
  int controls = 0;
  for (const auto& row : r.rows) {
    if (row.metric != "seed_ratio") continue;
    if (row.condition.find("kind=none") != std::string::npos) {
      ++controls;
      CHECK(row.value == 1.0);
    } else if (row.value) {
      CHECK(*row.value > 0.0);
    }
  }
  CHECK(controls == 3);
}

TEST_CASE("summarize") {
  CHECK(summarize({}).empty());
  ReportRow one{"e", "c", "", "m", 2.5, 0, 1};
  const auto s1 = summarize({one});
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].count == 1);
  CHECK(s1[0].mean == 2.5);
  CHECK(s1[0].stddev == 0.0);

  std::vector<ReportRow> rows;
  const std::vector<double> vals{1.0, 4.0, 2.0, 7.0};
  for (double v : vals) rows.push_back({"e", "c", "", "m", v, 0, 1});
  rows.push_back({"e", "c", "", "m", std::nullopt, 0, 1});
  rows.push_back({"e", "d", "", "m", 3.0, 0, 1});
  const auto s = summarize(rows);
  REQUIRE(s.size() == 2);
  double mean = 0;
  for (double v : vals) mean += v;
  mean /= vals.size();
  double ss = 0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  CHECK(s[0].condition == "c");
  CHECK(s[0].count == 4);
  CHECK(s[0].mean == doctest::Approx(mean));
  CHECK(s[0].stddev == doctest::Approx(std::sqrt(ss / 3)));
  CHECK(s[1].condition == "d");

  std::ostringstream out;
  write_rows_csv(rows, out);
  CHECK(out.str().rfind("experiment,condition,item,metric,value,replicate,seed\n", 0) == 0);
  CHECK(label_number(0.2) == "0.2");
  CHECK(label_number(15) == "15");
}

TEST_CASE("spec validation") {
  ExperimentSpec s;
  s.replicates = 0;
  CHECK_THROWS_AS(s.check(), std::invalid_argument);
  s.replicates = 2;
  s.seeds = {5, 6};
  CHECK(s.replicate_seed(1) == 6);
  s.seeds.clear();
  CHECK(s.replicate_seed(1) == derive_seed(1, "replicate/1"));
  CHECK(experiment_kind_from_string(to_string(ExperimentKind::SensitivityGrid)) == ExperimentKind::SensitivityGrid);
}
