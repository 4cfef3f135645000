#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "apsched/apprentice.hpp"
#include "apsched/bnb.hpp"
#include "apsched/datasets.hpp"
#include "apsched/evaluation.hpp"
#include "apsched/experiments.hpp"
#include "apsched/json_io.hpp"
#include "apsched/model.hpp"
#include "apsched/policy.hpp"
#include "apsched/synthetic.hpp"
#include "apsched/validate.hpp"

namespace fs = std::filesystem;
using namespace apsched;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  bool json_logs = false;
};

Globals g;

void log_line(const std::string& msg) {
  if (g.json_logs) {
    std::cerr << json{{"level", "info"}, {"message", msg}}.dump() << '\n';
  } else {
    std::cerr << msg << '\n';
  }
}

void emit(const json& j) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(g.out, j);
    log_line("wrote " + g.out);
  }
}

// Files given directly, or every *.json inside given directories (sorted).
std::vector<fs::path> expand(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.path().extension() == ".json") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

std::vector<Demonstration> load_demos(const std::vector<std::string>& inputs) {
  std::vector<Demonstration> demos;
  for (const auto& p : expand(inputs)) demos.push_back(read_json_file(p).get<Demonstration>());
  if (demos.empty()) throw std::invalid_argument("no demonstrations given");
  return demos;
}

ProblemInstance load_problem(const std::string& path) { return read_json_file(path).get<ProblemInstance>(); }

void add_generator_flags(CLI::App* app, GenConfig& c, std::string& type) {
  app->add_option("--type", type, "Preset: mixed, travel_distance, resource_contention, temporal_requirements");
  app->add_option("--tasks", c.num_tasks, "Tasks per instance");
  app->add_option("--agents", c.num_agents, "Agents per instance");
  app->add_option("--resources", c.num_resources, "Number of resources");
  app->add_option("--grid-width", c.grid.width);
  app->add_option("--grid-height", c.grid.height);
  app->add_flag("--heterogeneous{false},--homogeneous{true}", c.homogeneous, "Agent speed and duration model");
  app->add_option("--fraction-waits", c.fraction_with_waits);
  app->add_option("--fraction-deadlines", c.fraction_with_deadlines);
  app->add_option("--fraction-relative", c.fraction_relative);
  app->add_option("--deadline-scale", c.deadline_scale);
  app->add_option("--max-wait", c.max_wait);
  app->add_option("--max-retries", c.max_retries);
}

// Preset fields first, then any flags the user set explicitly.
GenConfig resolve_generator(const CLI::App* app, const GenConfig& flags, const std::string& type) {
  GenConfig c = flags;
  if (!type.empty()) {
    c = preset(problem_type_from_string(type), flags.num_tasks, 0);
    auto keep = [&](const char* name, auto member) {
      if (app->count(name)) c.*member = flags.*member;
    };
    keep("--agents", &GenConfig::num_agents);
    keep("--resources", &GenConfig::num_resources);
    keep("--fraction-waits", &GenConfig::fraction_with_waits);
    keep("--fraction-deadlines", &GenConfig::fraction_with_deadlines);
    keep("--fraction-relative", &GenConfig::fraction_relative);
    keep("--deadline-scale", &GenConfig::deadline_scale);
    keep("--max-wait", &GenConfig::max_wait);
    keep("--max-retries", &GenConfig::max_retries);
    if (app->count("--grid-width")) c.grid.width = flags.grid.width;
    if (app->count("--grid-height")) c.grid.height = flags.grid.height;
    if (app->count("--heterogeneous") || app->count("--homogeneous")) c.homogeneous = flags.homogeneous;
  }
  c.check();
  return c;
}

void write_to_dir_or_file(const std::vector<json>& docs, const std::string& stem) {
  if (docs.size() == 1) {
    emit(docs[0]);
    return;
  }
  if (g.out.empty()) throw std::invalid_argument("--out DIR is required when writing more than one file");
  fs::create_directories(g.out);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu.json", stem.c_str(), i);
    write_json_file(fs::path(g.out) / name, docs[i]);
  }
  log_line("wrote " + std::to_string(docs.size()) + " files to " + g.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Apprenticeship scheduling: demonstrations, learned policies and seeded branch-and-bound"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "Master RNG seed");
  app.add_option("--out", g.out, "Output file or directory (stdout when omitted)");
  app.add_flag("--json-logs", g.json_logs, "Log progress as JSON lines on stderr");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate random problem instances");
  GenConfig gen_flags;
  std::string gen_type;
  int gen_count = 1;
  add_generator_flags(gen, gen_flags, gen_type);
  gen->add_option("--count", gen_count, "Number of instances")->check(CLI::PositiveNumber);
  gen->callback([&] {
    const GenConfig base = resolve_generator(gen, gen_flags, gen_type);
    std::vector<json> docs;
    for (int i = 0; i < gen_count; ++i) {
      GenConfig c = base;
      c.rng_seed = gen_count == 1 ? g.seed : derive_seed(g.seed, "instance/" + std::to_string(i));
      docs.push_back(generate_instance(c));
    }
    write_to_dir_or_file(docs, "problem");
  });

  // demonstrate
  auto* dem = app.add_subcommand("demonstrate", "Run the mock expert on problems");
  std::vector<std::string> dem_problems;
  double dem_eps = 0.0;
  dem->add_option("--problem", dem_problems, "Problem files or directories")->required();
  dem->add_option("--epsilon", dem_eps, "Probability of a random alternative choice")->check(CLI::Range(0.0, 1.0));
  dem->callback([&] {
    std::vector<json> docs;
    const auto files = expand(dem_problems);
    for (std::size_t i = 0; i < files.size(); ++i) {
      const auto p = load_problem(files[i].string());
      const std::uint64_t s = files.size() == 1 ? g.seed : derive_seed(g.seed, "demo/" + std::to_string(i));
      docs.push_back(demonstrate(p, dem_eps, s));
    }
    write_to_dir_or_file(docs, "demo");
  });

  // train
  auto* tr = app.add_subcommand("train", "Train a pairwise policy from demonstrations");
  std::vector<std::string> tr_demos;
  std::optional<std::size_t> tr_pml, tr_aml;
  std::string tr_csv;
  tr->add_option("--demos", tr_demos, "Demonstration files or directories")->required();
  tr->add_option("--priority-min-leaf", tr_pml, "Fixed min_leaf for f_priority (tuned by CV when omitted)");
  tr->add_option("--act-min-leaf", tr_aml, "Fixed min_leaf for f_act (tuned by CV when omitted)");
  tr->add_option("--export-datasets", tr_csv, "Directory for pairwise.csv and act.csv");
  tr->callback([&] {
    const auto demos = load_demos(tr_demos);
    if (!tr_csv.empty()) {
      fs::create_directories(tr_csv);
      write_csv((fs::path(tr_csv) / "pairwise.csv").string(), build_pairwise_dataset(demos));
      write_csv((fs::path(tr_csv) / "act.csv").string(), build_act_dataset(demos));
    }
    TrainOptions opts;
    opts.priority_min_leaf = tr_pml;
    opts.act_min_leaf = tr_aml;
    const TrainedPolicy t = train_policy(demos, opts);
    if (t.priority_cv) log_line("f_priority min_leaf " + std::to_string(t.priority_cv->best_min_leaf));
    if (t.act_cv) log_line("f_act min_leaf " + std::to_string(t.act_cv->best_min_leaf));
    emit(to_json(t.model));
  });

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Sensitivity and specificity of a policy on demonstrations");
  std::string ev_model;
  std::vector<std::string> ev_demos;
  ev->add_option("--model", ev_model, "Policy model file")->required();
  ev->add_option("--demos", ev_demos, "Demonstration files or directories")->required();
  ev->callback([&] {
    const LearnedPolicy policy(policy_model_from_json(read_json_file(ev_model)));
    const Metrics m = evaluate(policy, load_demos(ev_demos));
    emit({{"sensitivity", m.sensitivity ? json(*m.sensitivity) : json(nullptr)},
          {"specificity", m.specificity ? json(*m.specificity) : json(nullptr)},
          {"scheduling_observations", m.scheduling_observations},
          {"idle_observations", m.idle_observations}});
  });

  // schedule
  auto* sc = app.add_subcommand("schedule", "Build a schedule with a learned policy");
  std::string sc_problem, sc_model;
  bool sc_no_test = false, sc_worst = false;
  std::optional<std::size_t> sc_depth;
  sc->add_option("--problem", sc_problem)->required();
  sc->add_option("--model", sc_model)->required();
  sc->add_flag("--no-schedulability-test", sc_no_test);
  sc->add_option("--fallback-depth", sc_depth, "Ranked candidates tried per decision (all when omitted)");
  sc->add_flag("--worst", sc_worst, "Pick the least preferred task");
  sc->callback([&] {
    const auto problem = load_problem(sc_problem);
    const LearnedPolicy policy(policy_model_from_json(read_json_file(sc_model)));
    SchedulerConfig cfg;
    cfg.use_schedulability_test = !sc_no_test;
    cfg.fallback_depth = sc_depth;
    cfg.mode = sc_worst ? PolicyMode::Worst : PolicyMode::Best;
    const Schedule s = construct_schedule(problem, policy, cfg);
    emit({{"schedule", s}, {"feasibility", validate_schedule(problem, s)}});
  });

  // optimize
  auto* op = app.add_subcommand("optimize", "Branch-and-bound, optionally seeded with a schedule");
  std::string op_problem, op_seed;
  BnBOptions op_opts;
  op->add_option("--problem", op_problem)->required();
  op->add_option("--seed,--seed-schedule", op_seed, "Seed schedule file (a schedule or a schedule command output)");
  op->add_option("--gap", op_opts.gap_threshold);
  op->add_option("--node-limit", op_opts.node_limit);
  op->add_option("--time-limit", op_opts.time_limit, "Seconds");
  op->callback([&] {
    const auto problem = load_problem(op_problem);
    std::optional<Schedule> seed;
    if (!op_seed.empty()) {
      const json j = read_json_file(op_seed);
      seed = (j.contains("schedule") ? j.at("schedule") : j).get<Schedule>();
    }
    const BnBResult r = branch_and_bound(formulate(problem), seed, op_opts);
    for (const auto& w : r.warnings) log_line("warning: " + w);
    emit(to_json(r));
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run an experiment and write CSV reports");
  ExperimentSpec spec;
  std::string ex_kind;
  GenConfig ex_gen;
  std::string ex_type;
  ex->add_option("kind", ex_kind,
                 "accuracy_sweep, baseline_comparison, hyperparameter_tuning, covas_benchmark, sensitivity_grid")
      ->required();
  ex->add_option("--demos", spec.demo_counts, "Demonstration counts");
  ex->add_option("--epsilons", spec.epsilons, "Demonstrator noise levels");
  ex->add_option("--replicates", spec.replicates);
  ex->add_option("--seeds", spec.seeds, "One seed per replicate");
  ex->add_option("--instances", spec.num_instances, "Benchmark instances per replicate");
  ex->add_option("--instance-tasks", spec.instance_tasks, "Task counts cycled over benchmark instances");
  ex->add_option("--train-tasks", spec.train_tasks);
  ex->add_option("--train-demos", spec.train_demos);
  ex->add_option("--problems-per-cell", spec.problems_per_cell);
  ex->add_option("--grid-tasks", spec.grid_tasks);
  ex->add_flag("--paper-scale", spec.paper_scale, "15 problems x 5 replicates per grid cell");
  ex->add_flag("--no-controls{false}", spec.include_controls, "Skip the unperturbed control cells");
  ex->add_option("--node-limit", spec.bnb.node_limit);
  ex->add_option("--time-limit", spec.bnb.time_limit);
  ex->add_option("--gap", spec.bnb.gap_threshold);
  add_generator_flags(ex, ex_gen, ex_type);
  ex->callback([&] {
    spec.kind = experiment_kind_from_string(ex_kind);
    spec.master_seed = g.seed;
    spec.generator = resolve_generator(ex, ex_gen, ex_type);
    spec.output_dir = g.out.empty() ? fs::path("results") : fs::path(g.out);
    const Report report = run_experiment(spec, log_line);
    write_report(report, spec.output_dir);
    for (const auto& n : report.notes) log_line("note: " + n);
    log_line("wrote " + std::to_string(report.rows.size()) + " rows to " + spec.output_dir.string());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    if (g.json_logs) {
      std::cerr << json{{"level", "error"}, {"message", e.what()}}.dump() << '\n';
    } else {
      std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
  }
  return 0;
}
