#include "apsched/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "apsched/apprentice.hpp"
#include "apsched/covas.hpp"
#include "apsched/evaluation.hpp"
#include "apsched/policy.hpp"
#include "apsched/validate.hpp"

namespace apsched {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::AccuracySweep: return "accuracy_sweep";
    case ExperimentKind::BaselineComparison: return "baseline_comparison";
    case ExperimentKind::HyperparameterTuning: return "hyperparameter_tuning";
    case ExperimentKind::CovasBenchmark: return "covas_benchmark";
    case ExperimentKind::SensitivityGrid: return "sensitivity_grid";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::AccuracySweep, ExperimentKind::BaselineComparison,
                 ExperimentKind::HyperparameterTuning, ExperimentKind::CovasBenchmark,
                 ExperimentKind::SensitivityGrid}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown experiment kind: " + s);
}

void ExperimentSpec::check() const {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (!seeds.empty() && seeds.size() != static_cast<std::size_t>(replicates)) {
    throw std::invalid_argument("seeds must list one seed per replicate");
  }
  if (demo_counts.empty() || epsilons.empty()) throw std::invalid_argument("demo_counts and epsilons must be nonempty");
  for (int n : demo_counts) {
    if (n < 1) throw std::invalid_argument("demo counts must be >= 1");
  }
  for (double e : epsilons) {
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (min_leaf_grid.empty()) throw std::invalid_argument("min_leaf_grid must be nonempty");
  if (num_instances < 1 || instance_tasks.empty() || train_tasks < 1 || train_demos < 1) {
    throw std::invalid_argument("benchmark sizes must be positive");
  }
  for (int t : instance_tasks) {
    if (t < 1) throw std::invalid_argument("instance task counts must be >= 1");
  }
  if (problems_per_cell < 1 || grid_tasks < 1) throw std::invalid_argument("grid sizes must be positive");
  generator.check();
}

std::uint64_t ExperimentSpec::replicate_seed(int replicate) const {
  if (!seeds.empty()) return seeds.at(static_cast<std::size_t>(replicate));
  return derive_seed(master_seed, "replicate/" + std::to_string(replicate));
}

std::string label_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct RowSink {
  Report& report;

  void add(const std::string& condition, const std::string& item, const std::string& metric,
           std::optional<double> value, int replicate, std::uint64_t seed) {
    report.rows.push_back({report.experiment, condition, item, metric, value, replicate, seed});
  }
  void time(const std::string& condition, const std::string& item, const std::string& metric, double value,
            int replicate, std::uint64_t seed) {
    report.timing.push_back({report.experiment, condition, item, metric, value, replicate, seed});
  }
  void metrics(const std::string& condition, const std::string& item, const Metrics& m, int replicate,
               std::uint64_t seed) {
    add(condition, item, "sensitivity", m.sensitivity, replicate, seed);
    add(condition, item, "specificity", m.specificity, replicate, seed);
    add(condition, item, "scheduling_observations", static_cast<double>(m.scheduling_observations), replicate, seed);
    add(condition, item, "idle_observations", static_cast<double>(m.idle_observations), replicate, seed);
  }
};

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

template <typename F>
auto with_label(const std::string& label, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(label + ": " + e.what());
  }
}

// The noisy demonstrator can run past the horizon; redraw a bounded number
// of times before giving up.
Demonstration noisy_demonstration(const ProblemInstance& problem, double epsilon, std::uint64_t seed,
                                  const RuleParams& params) {
  for (int k = 0; k < 20; ++k) {
    const std::uint64_t s = k == 0 ? seed : derive_seed(seed, "retry/" + std::to_string(k));
    try {
      return demonstrate(problem, epsilon, s, params);
    } catch (const IncompleteDemonstration&) {
    }
  }
  throw IncompleteDemonstration("demonstrator failed to finish after 20 draws");
}

ProblemInstance instance_for(const GenConfig& base, int num_tasks, std::uint64_t seed) {
  GenConfig g = base;
  g.num_tasks = num_tasks;
  g.rng_seed = seed;
  return generate_instance(g);
}

struct Split {
  std::vector<Demonstration> train;
  std::vector<Demonstration> test;
};

// n demonstrations split 85/15 by demonstration. Held-out instances are
// evaluated against clean re-demonstrations. With a single demonstration an
// extra instance is generated for testing.
Split make_split(const ExperimentSpec& spec, int n, double epsilon, std::uint64_t cs) {
  const auto un = static_cast<std::size_t>(n);
  std::size_t n_test = num_test_demos(un);
  std::size_t n_train = un - n_test;
  if (n_train == 0) n_train = un;
  Split s;
  for (std::size_t i = 0; i < n_train + n_test; ++i) {
    const auto tag = std::to_string(i);
    const ProblemInstance p = instance_for(spec.generator, spec.generator.num_tasks, derive_seed(cs, "instance/" + tag));
    if (i < n_train) {
      s.train.push_back(noisy_demonstration(p, epsilon, derive_seed(cs, "demo/" + tag), spec.generator.rule));
    } else {
      s.test.push_back(demonstrate(p, 0.0, derive_seed(cs, "test/" + tag), spec.generator.rule));
    }
  }
  return s;
}

std::string learning_condition(int n, double epsilon) {
  return "demos=" + std::to_string(n) + ";epsilon=" + label_number(epsilon);
}

template <typename Body>
void for_learning_conditions(const ExperimentSpec& spec, const Logger& log, Body&& body) {
  spec.check();
  for (int r = 0; r < spec.replicates; ++r) {
    const std::uint64_t rs = spec.replicate_seed(r);
    for (int n : spec.demo_counts) {
      for (double e : spec.epsilons) {
        const std::string cond = learning_condition(n, e);
        const std::uint64_t cs = derive_seed(rs, cond);
        say(log, cond + " replicate " + std::to_string(r));
        with_label(cond + " replicate " + std::to_string(r), [&] {
          const Split split = make_split(spec, n, e, cs);
          body(cond, r, cs, split);
        });
      }
    }
  }
}

TrainOptions tuned_options(const ExperimentSpec& spec) {
  TrainOptions o;
  o.grid = spec.min_leaf_grid;
  return o;
}

void add_min_leaf_rows(RowSink& sink, const std::string& cond, const std::string& item, const PolicyModel& m,
                       int r, std::uint64_t cs) {
  sink.add(cond, item, "priority_min_leaf", static_cast<double>(m.f_priority.min_leaf()), r, cs);
  sink.add(cond, item, "act_min_leaf", static_cast<double>(m.f_act.min_leaf()), r, cs);
}

std::vector<Demonstration> clean_training_demos(const ExperimentSpec& spec, int count, int num_tasks,
                                                std::uint64_t seed, ProblemType type, bool use_preset) {
  std::vector<Demonstration> demos;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, "train/" + std::to_string(i));
    GenConfig g = use_preset ? preset(type, num_tasks, s) : spec.generator;
    g.num_tasks = num_tasks;
    g.rng_seed = s;
    const ProblemInstance p = generate_instance(g);
    demos.push_back(demonstrate(p, 0.0, derive_seed(s, "demo"), g.rule));
  }
  return demos;
}

}  // namespace

Report run_accuracy_sweep(const ExperimentSpec& spec, const Logger& log) {
  Report report;
  report.experiment = to_string(ExperimentKind::AccuracySweep);
  RowSink sink{report};
  for_learning_conditions(spec, log, [&](const std::string& cond, int r, std::uint64_t cs, const Split& split) {
    const auto t0 = Clock::now();
    const TrainedPolicy trained = train_policy(split.train, tuned_options(spec));
    sink.time(cond, "", "train_seconds", seconds_since(t0), r, cs);
    const LearnedPolicy policy(trained.model);
    sink.metrics(cond, "", evaluate(policy, split.test), r, cs);
    add_min_leaf_rows(sink, cond, "", trained.model, r, cs);
  });
  return report;
}

Report run_hyperparameter_tuning(const ExperimentSpec& spec, const Logger& log) {
  Report report;
  report.experiment = to_string(ExperimentKind::HyperparameterTuning);
  RowSink sink{report};
  for_learning_conditions(spec, log, [&](const std::string& cond, int r, std::uint64_t cs, const Split& split) {
    TrainOptions untuned;
    untuned.priority_min_leaf = 1;
    untuned.act_min_leaf = 1;
    const std::pair<std::string, TrainOptions> variants[] = {{"tuned", tuned_options(spec)}, {"untuned", untuned}};
    for (const auto& [name, opts] : variants) {
      const std::string c = cond + ";tuning=" + name;
      const auto t0 = Clock::now();
      const TrainedPolicy trained = train_policy(split.train, opts);
      sink.time(c, "", "train_seconds", seconds_since(t0), r, cs);
      sink.metrics(c, "", evaluate(LearnedPolicy(trained.model), split.test), r, cs);
      add_min_leaf_rows(sink, c, "", trained.model, r, cs);
    }
  });
  return report;
}

Report run_baseline_comparison(const ExperimentSpec& spec, const Logger& log) {
  Report report;
  report.experiment = to_string(ExperimentKind::BaselineComparison);
  RowSink sink{report};
  for_learning_conditions(spec, log, [&](const std::string& cond, int r, std::uint64_t cs, const Split& split) {
    const TrainOptions opts = tuned_options(spec);
    auto t0 = Clock::now();
    const TrainedPolicy trained = train_policy(split.train, opts);
    sink.time(cond + ";method=pairwise", "", "train_seconds", seconds_since(t0), r, cs);
    sink.metrics(cond + ";method=pairwise", "", evaluate(LearnedPolicy(trained.model), split.test), r, cs);

    t0 = Clock::now();
    const PointwisePolicy pointwise = train_pointwise(split.train, trained.model.f_act, opts);
    sink.time(cond + ";method=pointwise", "", "train_seconds", seconds_since(t0), r, cs);
    sink.metrics(cond + ";method=pointwise", "", evaluate(pointwise, split.test), r, cs);

    bool same_size = true;
    for (const auto& d : split.train) same_size = same_size && d.problem.num_tasks() == split.train[0].problem.num_tasks();
    for (const auto& d : split.test) same_size = same_size && d.problem.num_tasks() == split.train[0].problem.num_tasks();
    if (!same_size) {
      report.notes.push_back(cond + " replicate " + std::to_string(r) + ": naive method skipped, task counts vary");
      return;
    }
    t0 = Clock::now();
    const NaivePolicy naive = train_naive(split.train, trained.model.f_act, opts);
    sink.time(cond + ";method=naive", "", "train_seconds", seconds_since(t0), r, cs);
    sink.metrics(cond + ";method=naive", "", evaluate(naive, split.test), r, cs);
  });
  return report;
}

Report run_covas_benchmark(const ExperimentSpec& spec, const Logger& log) {
  spec.check();
  Report report;
  report.experiment = to_string(ExperimentKind::CovasBenchmark);
  RowSink sink{report};
  for (int r = 0; r < spec.replicates; ++r) {
    const std::uint64_t rs = spec.replicate_seed(r);
    const std::string train_cond = "train_tasks=" + std::to_string(spec.train_tasks);
    say(log, "training policy for replicate " + std::to_string(r));
    const auto t0 = Clock::now();
    const TrainedPolicy trained = with_label(train_cond, [&] {
      const auto demos = clean_training_demos(spec, spec.train_demos, spec.train_tasks, rs, ProblemType::Mixed, false);
      return train_policy(demos, tuned_options(spec));
    });
    sink.time(train_cond, "", "train_seconds", seconds_since(t0), r, rs);
    add_min_leaf_rows(sink, train_cond, "", trained.model, r, rs);
    const LearnedPolicy policy(trained.model);

    for (int i = 0; i < spec.num_instances; ++i) {
      const int tasks = spec.instance_tasks[static_cast<std::size_t>(i) % spec.instance_tasks.size()];
      const std::string cond = "tasks=" + std::to_string(tasks) + ";" + train_cond;
      const std::string item = "instance=" + std::to_string(i);
      const std::uint64_t is = derive_seed(rs, "instance/" + std::to_string(i));
      say(log, cond + " " + item);
      with_label(cond + " " + item, [&] {
        const ProblemInstance problem = instance_for(spec.generator, tasks, is);
        const SchedModel model = formulate(problem);
        const BnBResult cold = branch_and_bound(model, std::nullopt, spec.bnb);
        const CovasResult warm = covas(problem, policy, {}, spec.bnb);
        const BnBResult& seeded = warm.search;
        auto add = [&](const std::string& metric, std::optional<double> v) { sink.add(cond, item, metric, v, r, is); };
        add("seed_feasible", warm.seed_usable ? 1.0 : 0.0);
        add("seed_complete", warm.seed.complete ? 1.0 : 0.0);
        add("nodes_cold", static_cast<double>(cold.nodes_explored));
        add("nodes_seeded", static_cast<double>(seeded.nodes_explored));
        add("solved_cold", cold.solved() ? 1.0 : 0.0);
        add("solved_seeded", seeded.solved() ? 1.0 : 0.0);
        add("gap_cold", cold.has_solution() ? std::optional<double>(cold.gap) : std::nullopt);
        add("gap_seeded", seeded.has_solution() ? std::optional<double>(seeded.gap) : std::nullopt);
        add("objective_cold", cold.has_solution() ? std::optional<double>(static_cast<double>(cold.objective)) : std::nullopt);
        add("objective_seeded",
            seeded.has_solution() ? std::optional<double>(static_cast<double>(seeded.objective)) : std::nullopt);
        add("node_reduction", seeded.nodes_explored > 0 ? std::optional<double>(static_cast<double>(cold.nodes_explored) /
                                                                                static_cast<double>(seeded.nodes_explored))
                                                        : std::nullopt);
        std::optional<double> ratio, beat_cold, beat_seeded;
        if (warm.seed_usable) {
          const Tick seed_obj = makespan(warm.seed);
          Tick best = seed_obj;
          if (cold.has_solution()) best = std::min(best, cold.objective);
          if (seeded.has_solution()) best = std::min(best, seeded.objective);
          add("seed_objective", static_cast<double>(seed_obj));
          ratio = static_cast<double>(seed_obj) / static_cast<double>(best);
          if (auto u = cold.first_better_than(seed_obj)) {
            beat_cold = static_cast<double>(u->node);
            sink.time(cond, item, "seconds_to_beat_seed_cold", u->seconds, r, is);
          }
          if (auto u = seeded.first_better_than(seed_obj)) {
            beat_seeded = static_cast<double>(u->node);
            sink.time(cond, item, "seconds_to_beat_seed_seeded", u->seconds, r, is);
          }
        }
        add("seed_ratio", ratio);
        add("nodes_to_beat_seed_cold", beat_cold);
        add("nodes_to_beat_seed_seeded", beat_seeded);
        sink.time(cond, item, "wall_time_cold", cold.wall_time, r, is);
        sink.time(cond, item, "wall_time_seeded", seeded.wall_time, r, is);
        for (const auto& w : seeded.warnings) report.notes.push_back(cond + " " + item + ": " + w);
      });
    }
  }
  return report;
}

const std::vector<ProblemType>& grid_problem_types() {
  static const std::vector<ProblemType> types{ProblemType::TravelDistance, ProblemType::ResourceContention,
                                              ProblemType::TemporalRequirements};
  return types;
}

std::string GridPoint::condition() const {
  return "type=" + to_string(type) + ";kind=" + (kind ? to_string(*kind) : std::string("none")) +
         ";count=" + std::to_string(count);
}

std::vector<GridPoint> plan_sensitivity_grid(const ExperimentSpec& spec) {
  const int problems = spec.paper_scale ? 15 : spec.problems_per_cell;
  const int reps = spec.paper_scale ? 5 : spec.replicates;
  std::vector<GridPoint> plan;
  for (ProblemType type : grid_problem_types()) {
    for (PerturbKind kind : {PerturbKind::Swap, PerturbKind::Steal, PerturbKind::Sequence}) {
      for (int count = 1; count <= 3; ++count) {
        for (int p = 0; p < problems; ++p) {
          for (int r = 0; r < reps; ++r) plan.push_back({type, kind, count, p, r});
        }
      }
    }
    if (spec.include_controls) {
      for (int p = 0; p < problems; ++p) plan.push_back({type, std::nullopt, 0, p, 0});
    }
  }
  return plan;
}

std::size_t count_grid_cells(const std::vector<GridPoint>& plan) {
  std::vector<std::tuple<int, int, int>> cells;
  for (const auto& g : plan) {
    if (g.kind) cells.emplace_back(static_cast<int>(g.type), static_cast<int>(*g.kind), g.count);
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

namespace {

RuleKind expected_rule(ProblemType type) {
  switch (type) {
    case ProblemType::TravelDistance: return RuleKind::TravelDistance;
    case ProblemType::ResourceContention: return RuleKind::ResourceContention;
    default: return RuleKind::TemporalRequirements;
  }
}

// Per-problem state shared by every grid cell of that problem.
struct GridProblem {
  ProblemInstance problem;
  std::uint64_t seed = 0;
  bool usable = false;
  Schedule apprentice;
  Schedule reference;  // apprentice schedule after re-timing without moves
  std::optional<BnBResult> cold;
};

}  // namespace

Report run_sensitivity_grid(const ExperimentSpec& spec, const Logger& log) {
  spec.check();
  Report report;
  report.experiment = to_string(ExperimentKind::SensitivityGrid);
  RowSink sink{report};
  const std::uint64_t ms = spec.replicate_seed(0);
  const auto plan = plan_sensitivity_grid(spec);

  std::map<std::pair<ProblemType, int>, GridProblem> problems;
  std::map<ProblemType, PolicyModel> policies;
  auto policy_for = [&](ProblemType type) -> const PolicyModel& {
    auto it = policies.find(type);
    if (it != policies.end()) return it->second;
    const std::string label = "type=" + to_string(type);
    say(log, "training policy for " + label);
    const auto t0 = Clock::now();
    const std::uint64_t ts = derive_seed(ms, label + "/train");
    PolicyModel model = with_label(label, [&] {
      return train_policy(clean_training_demos(spec, spec.train_demos, spec.grid_tasks, ts, type, true),
                          tuned_options(spec))
          .model;
    });
    sink.time(label, "", "train_seconds", seconds_since(t0), 0, ts);
    add_min_leaf_rows(sink, label, "", model, 0, ts);
    return policies.emplace(type, std::move(model)).first->second;
  };
  auto problem_for = [&](ProblemType type, int index) -> GridProblem& {
    auto key = std::make_pair(type, index);
    auto it = problems.find(key);
    if (it != problems.end()) return it->second;
    const std::string label = "type=" + to_string(type);
    const std::string item = "problem=" + std::to_string(index);
    GridProblem gp;
    gp.seed = derive_seed(ms, label + "/problem/" + std::to_string(index));
    with_label(label + " " + item, [&] {
      gp.problem = generate_instance(preset(type, spec.grid_tasks, gp.seed));
      const LearnedPolicy policy(policy_for(type));
      gp.apprentice = construct_schedule(gp.problem, policy);
      gp.usable = gp.apprentice.complete && validate_schedule(gp.problem, gp.apprentice).feasible();
      sink.add(label, item, "rule_regime_matches",
               select_rule(gp.problem, preset(type, spec.grid_tasks, gp.seed).rule) == expected_rule(type) ? 1.0 : 0.0,
               0, gp.seed);
      sink.add(label, item, "apprentice_feasible", gp.usable ? 1.0 : 0.0, 0, gp.seed);
      if (!gp.usable) {
        report.notes.push_back(label + " " + item + ": apprentice schedule unusable, its data points are absent");
        return;
      }
      gp.reference = perturb(gp.problem, gp.apprentice, PerturbKind::Swap, 0, gp.seed);
      gp.cold = branch_and_bound(formulate(gp.problem), std::nullopt, spec.bnb);
      sink.add(label, item, "nodes_cold", static_cast<double>(gp.cold->nodes_explored), 0, gp.seed);
      sink.add(label, item, "solved_cold", gp.cold->solved() ? 1.0 : 0.0, 0, gp.seed);
      sink.time(label, item, "wall_time_cold", gp.cold->wall_time, 0, gp.seed);
    });
    return problems.emplace(key, std::move(gp)).first->second;
  };

  for (const GridPoint& g : plan) {
    const std::string cond = g.condition();
    const std::string item = "problem=" + std::to_string(g.problem);
    GridProblem& gp = problem_for(g.type, g.problem);
    const std::uint64_t ps = derive_seed(gp.seed, cond + "/replicate/" + std::to_string(g.replicate));
    auto add = [&](const std::string& metric, std::optional<double> v) { sink.add(cond, item, metric, v, g.replicate, ps); };
    if (!gp.usable) {
      add("seed_ratio", std::nullopt);
      continue;
    }
    std::optional<Schedule> seed;
    try {
      seed = g.kind ? perturb(gp.problem, gp.apprentice, *g.kind, g.count, ps) : gp.reference;
    } catch (const PerturbationError& e) {
      report.notes.push_back(cond + " " + item + " replicate " + std::to_string(g.replicate) + ": " + e.what());
      add("seed_ratio", std::nullopt);
      continue;
    }
    say(log, cond + " " + item + " replicate " + std::to_string(g.replicate));
    with_label(cond + " " + item, [&] {
      const BnBResult run = branch_and_bound(formulate(gp.problem), seed, spec.bnb);
      const double m = static_cast<double>(makespan(*seed));
      add("seed_ratio", m / static_cast<double>(makespan(gp.reference)));
      std::optional<double> to_opt;
      if (gp.cold->solved() || run.solved()) {
        const Tick best = std::min(gp.cold->has_solution() ? gp.cold->objective : seed->objective,
                                   run.has_solution() ? run.objective : seed->objective);
        to_opt = m / static_cast<double>(best);
      }
      add("seed_ratio_to_optimal", to_opt);
      add("nodes_seeded", static_cast<double>(run.nodes_explored));
      add("node_reduction", run.nodes_explored > 0 ? std::optional<double>(static_cast<double>(gp.cold->nodes_explored) /
                                                                             static_cast<double>(run.nodes_explored))
                                                   : std::nullopt);
      add("solved_seeded", run.solved() ? 1.0 : 0.0);
      add("gap_seeded", run.has_solution() ? std::optional<double>(run.gap) : std::nullopt);
      sink.time(cond, item, "wall_time_seeded", run.wall_time, g.replicate, ps);
    });
  }
  return report;
}

Report run_experiment(const ExperimentSpec& spec, const Logger& log) {
  switch (spec.kind) {
    case ExperimentKind::AccuracySweep: return run_accuracy_sweep(spec, log);
    case ExperimentKind::BaselineComparison: return run_baseline_comparison(spec, log);
    case ExperimentKind::HyperparameterTuning: return run_hyperparameter_tuning(spec, log);
    case ExperimentKind::CovasBenchmark: return run_covas_benchmark(spec, log);
    case ExperimentKind::SensitivityGrid: return run_sensitivity_grid(spec, log);
  }
  throw std::invalid_argument("unknown experiment kind");
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  // Groups keep first-appearance order so the output follows the report.
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> values;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.experiment, r.condition, r.metric);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.experiment, r.condition, r.metric, 0, 0.0, 0.0});
      values.emplace_back();
    }
    if (r.value) values[it->second].push_back(*r.value);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto& v = values[g];
    out[g].count = v.size();
    if (v.empty()) continue;
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out[g].mean = mean;
    out[g].stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_rows_csv(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << "experiment,condition,item,metric,value,replicate,seed\n";
  for (const auto& r : rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.condition) << ',' << csv_field(r.item) << ','
        << csv_field(r.metric) << ',' << (r.value ? number(*r.value) : std::string()) << ',' << r.replicate << ','
        << r.seed << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "experiment,condition,metric,count,mean,stddev\n";
  for (const auto& r : rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.condition) << ',' << csv_field(r.metric) << ',' << r.count
        << ',' << (r.count ? number(r.mean) : std::string()) << ',' << (r.count ? number(r.stddev) : std::string())
        << '\n';
  }
}

void write_summary_long_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "experiment,condition,metric,statistic,value\n";
  for (const auto& r : rows) {
    const std::string prefix = csv_field(r.experiment) + ',' + csv_field(r.condition) + ',' + csv_field(r.metric) + ',';
    out << prefix << "count," << r.count << '\n';
    if (!r.count) continue;
    out << prefix << "mean," << number(r.mean) << '\n';
    out << prefix << "stddev," << number(r.stddev) << '\n';
  }
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& suffix) {
    std::ofstream f(dir / (report.experiment + suffix));
    if (!f) throw std::runtime_error("cannot write " + (dir / (report.experiment + suffix)).string());
    return f;
  };
  {
    auto f = open(".csv");
    write_rows_csv(report.rows, f);
  }
  {
    auto f = open("_timing.csv");
    write_rows_csv(report.timing, f);
  }
  const auto summary = summarize(report.rows);
  {
    auto f = open("_summary.csv");
    write_summary_csv(summary, f);
  }
  {
    auto f = open("_summary_long.csv");
    write_summary_long_csv(summary, f);
  }
  auto f = open("_notes.txt");
  for (const auto& n : report.notes) f << n << '\n';
}

}  // namespace apsched
