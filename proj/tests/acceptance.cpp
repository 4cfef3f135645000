// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "apsched/apprentice.hpp"
#include "apsched/bnb.hpp"
#include "apsched/datasets.hpp"
#include "apsched/evaluation.hpp"
#include "apsched/experiments.hpp"
#include "apsched/perturb.hpp"
#include "apsched/policy.hpp"
#include "apsched/synthetic.hpp"
#include "apsched/validate.hpp"
#include "test_util.hpp"

using namespace apsched;

namespace {

std::filesystem::path g_out = "acceptance_results";

struct Verdict {
  bool pass = false;
  std::string detail;
};

void log_line(const std::string& s) { std::cerr << "  " << s << "\n"; }

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::vector<double> values(const Report& r, const std::string& cond, const std::string& metric) {
  std::vector<double> out;
  for (const auto& row : r.rows) {
    if (row.condition == cond && row.metric == metric && row.value) out.push_back(*row.value);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// item -> metric -> value for one condition.
std::map<std::string, std::map<std::string, std::optional<double>>> by_item(const Report& r, const std::string& cond) {
  std::map<std::string, std::map<std::string, std::optional<double>>> out;
  for (const auto& row : r.rows) {
    if (row.condition == cond && !row.item.empty()) out[row.item][row.metric] = row.value;
  }
  return out;
}

Report run_and_save(const ExperimentSpec& spec, const std::string& name) {
  Report r = run_experiment(spec, [](const std::string& s) { log_line(s); });
  write_report(r, g_out / name);
  return r;
}

Verdict criterion1() {
  ExperimentSpec s;
  s.kind = ExperimentKind::AccuracySweep;
  s.demo_counts = {150};
  s.epsilons = {0.0};
  s.replicates = 5;
  const Report r = run_and_save(s, "c1");
  const auto sens = values(r, "demos=150;epsilon=0", "sensitivity");
  const auto spec = values(r, "demos=150;epsilon=0", "specificity");
  const double ms = mean(sens), mp = mean(spec);
  return {sens.size() == 5 && spec.size() == 5 && ms >= 0.85 && mp >= 0.85,
          "mean sensitivity " + fmt(ms) + ", mean specificity " + fmt(mp) + " (need >= 0.85, 5 seeds)"};
}

Verdict criterion2() {
  ExperimentSpec s;
  s.kind = ExperimentKind::BaselineComparison;
  s.demo_counts = {150};
  s.epsilons = {0.0};
  s.replicates = 5;
  const Report r = run_and_save(s, "c2");
  const std::string base = "demos=150;epsilon=0;method=";
  const auto pw = values(r, base + "pairwise", "sensitivity");
  const auto pt = values(r, base + "pointwise", "sensitivity");
  const auto nv = values(r, base + "naive", "sensitivity");
  const double a = mean(pw), b = mean(pt), c = mean(nv);
  const bool ok = pw.size() == 5 && pt.size() == 5 && nv.size() == 5 && a - b > 0.02 && b - c > 0.02;
  return {ok, "pairwise " + fmt(a) + " > pointwise " + fmt(b) + " > naive " + fmt(c) + " (each gap > 0.02)"};
}

Report tuning_report() {
  static std::optional<Report> cached;
  if (!cached) {
    ExperimentSpec s;
    s.kind = ExperimentKind::HyperparameterTuning;
    s.demo_counts = {5, 15};
    s.epsilons = {0.2};
    s.replicates = 10;
    cached = run_and_save(s, "c3_c4");
  }
  return *cached;
}

Verdict criterion3() {
  const Report r = tuning_report();
  const std::string cond = "demos=15;epsilon=0.2;tuning=tuned";
  const auto sens = values(r, cond, "sensitivity");
  const auto spec = values(r, cond, "specificity");
  const double ms = mean(sens), mp = mean(spec);
  return {sens.size() == 10 && spec.size() == 10 && ms >= 0.80 && mp >= 0.80,
          "15 demos at epsilon 0.2, tuned: sensitivity " + fmt(ms) + ", specificity " + fmt(mp) +
              " (need >= 0.80, 10 seeds)"};
}

Verdict criterion4() {
  const Report r = tuning_report();
  const auto tuned = values(r, "demos=5;epsilon=0.2;tuning=tuned", "sensitivity");
  const auto untuned = values(r, "demos=5;epsilon=0.2;tuning=untuned", "sensitivity");
  const double d = mean(tuned) - mean(untuned);
  return {tuned.size() == 10 && untuned.size() == 10 && d >= 0.05,
          "5 demos at epsilon 0.2: tuned " + fmt(mean(tuned)) + " vs untuned " + fmt(mean(untuned)) +
              ", improvement " + fmt(d) + " (need >= 0.05)"};
}

Verdict criterion5() {
  int equal = 0, total = 0;
  for (std::uint64_t seed = 500; seed < 550; ++seed) {
    const auto p = testutil::small_instance(seed, 4, 2);
    const auto oracle = testutil::brute_force_makespan(p);
    const auto r = branch_and_bound(formulate(p));
    ++total;
    if (!oracle) {
      equal += !r.has_solution();
    } else {
      equal += r.solved() && r.objective == *oracle && validate_schedule(p, r.best_schedule).feasible();
    }
  }
  return {equal == 50 && total == 50, std::to_string(equal) + "/" + std::to_string(total) + " objectives equal"};
}

Verdict criterion6() {
  ExperimentSpec s;
  s.kind = ExperimentKind::CovasBenchmark;
  s.num_instances = 20;
  s.instance_tasks = {8, 9, 10};
  s.train_tasks = 10;
  s.train_demos = 30;
  s.generator.deadline_scale = 0.8;
  const Report r = run_and_save(s, "c6");
  int instances = 0, dominated = 0, gaps_ok = 0;
  std::vector<double> reductions;
  for (int t : s.instance_tasks) {
    for (const auto& [item, m] : by_item(r, "tasks=" + std::to_string(t) + ";train_tasks=10")) {
      ++instances;
      const double nc = m.at("nodes_cold").value(), ns = m.at("nodes_seeded").value();
      dominated += ns <= nc;
      const auto gc = m.at("gap_cold"), gs = m.at("gap_seeded");
      gaps_ok += m.at("solved_cold") == 1.0 && m.at("solved_seeded") == 1.0 && gc && gs && *gc <= 1e-3 && *gs <= 1e-3;
      const auto ratio = m.at("seed_ratio");
      if (ratio && *ratio <= 1.2) reductions.push_back(m.at("node_reduction").value());
    }
  }
  const double med = median(reductions);
  const bool ok = instances == 20 && dominated == 20 && gaps_ok == 20 && !reductions.empty() && med >= 1.3;
  return {ok, "seeded <= cold nodes on " + std::to_string(dominated) + "/" + std::to_string(instances) +
                  "; median node reduction " + fmt(med) + "x over " + std::to_string(reductions.size()) +
                  " instances with seed ratio <= 1.2 (need >= 1.3); gap <= 1e-3 on " + std::to_string(gaps_ok) + "/20"};
}

Verdict criterion7() {
  ExperimentSpec s;
  s.kind = ExperimentKind::CovasBenchmark;
  s.num_instances = 20;
  s.instance_tasks = {20};
  s.train_tasks = 10;
  s.train_demos = 30;
  s.bnb.node_limit = 200'000;
  s.bnb.time_limit = 1e9;
  const Report r = run_and_save(s, "c7");
  int instances = 0, feasible = 0, cold_solved = 0, implication = 0, seeded_solved = 0;
  for (const auto& [item, m] : by_item(r, "tasks=20;train_tasks=10")) {
    ++instances;
    feasible += m.at("seed_feasible") == 1.0;
    const bool c = m.at("solved_cold") == 1.0;
    const bool w = m.at("solved_seeded") == 1.0;
    cold_solved += c;
    seeded_solved += w;
    implication += !c || w;
  }
  const bool ok = instances == 20 && feasible >= 18 && implication == 20;
  return {ok, "feasible seeds " + std::to_string(feasible) + "/20 (need >= 18); cold solved " +
                  std::to_string(cold_solved) + ", seeded solved " + std::to_string(seeded_solved) +
                  ", seeded solved whenever cold did on " + std::to_string(implication) + "/20 (node limit 200000)"};
}

Verdict criterion8() {
  ExperimentSpec s;
  s.kind = ExperimentKind::SensitivityGrid;
  s.problems_per_cell = 5;
  s.replicates = 2;
  s.bnb.node_limit = 200'000;
  s.bnb.time_limit = 1e9;
  const auto plan = plan_sensitivity_grid(s);
  auto full = s;
  full.paper_scale = true;
  const auto full_plan = plan_sensitivity_grid(full);
  std::size_t full_points = 0;
  for (const auto& g : full_plan) full_points += g.kind.has_value();

  const Report r = run_and_save(s, "c8");
  std::set<std::string> cells;
  int controls = 0, controls_exact = 0;
  for (const auto& row : r.rows) {
    if (row.metric != "seed_ratio") continue;
    if (row.condition.find("kind=none") != std::string::npos) {
      ++controls;
      controls_exact += row.value && *row.value == 1.0;
    } else {
      cells.insert(row.condition);
    }
  }
  const bool ok = count_grid_cells(plan) == 27 && cells.size() == 27 && full_points == 2025 && controls > 0 &&
                  controls_exact == controls;
  return {ok, std::to_string(cells.size()) + " cells emitted (plan " + std::to_string(count_grid_cells(plan)) +
                  "); full-volume plan " + std::to_string(full_points) + " data points; control seed ratio 1.0 on " +
                  std::to_string(controls_exact) + "/" + std::to_string(controls)};
}

Verdict criterion9() {
  std::vector<std::string> failed;
  auto demos = [](std::uint64_t seed, int n, double eps) {
    std::vector<Demonstration> out;
    GenConfig c;
    c.num_tasks = 10;
    for (int i = 0; i < n; ++i) {
      c.rng_seed = derive_seed(seed, "c9/instance/" + std::to_string(i));
      out.push_back(demonstrate(generate_instance(c), eps, derive_seed(seed, "c9/demo/" + std::to_string(i))));
    }
    return out;
  };

  // Dataset symmetry and balance.
  bool sym = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset d = build_pairwise_dataset(demos(seed, 2, 0.3));
    sym &= d.size() % 2 == 0 && d.num_positive() * 2 == d.size();
    for (std::size_t r = 0; sym && r < d.size(); r += 2) {
      sym &= d.y[r] == 1 && d.y[r + 1] == 0;
      for (std::size_t k = kNumContextFeatures; k < kExampleDim; ++k) sym &= d.row(r)[k] == -d.row(r + 1)[k];
    }
  }
  if (!sym) failed.push_back("dataset symmetry");

  // Argmax invariance: reordering candidates or applying a monotone map to
  // the scores keeps the choice.
  bool argmax = true;
  const PolicyModel model = train_policy(demos(77, 10, 0.1)).model;
  std::mt19937_64 rng(1);
  for (const auto& d : demos(5, 3, 0.0)) {
    for (const auto& o : d.observations) {
      std::vector<TaskId> c;
      for (const auto& t : o.tasks) c.push_back(t.id);
      const TaskId best = select_task(model, o, c);
      auto scores = cumulative_scores(model, o, c);
      for (double& v : scores) v = std::exp(3.0 * v) + 7.0;
      argmax &= order_by_score(c, scores, PolicyMode::Best).front() == best;
      std::shuffle(c.begin(), c.end(), rng);
      argmax &= select_task(model, o, c) == best;
    }
  }
  if (!argmax) failed.push_back("argmax invariance");

  // Oracle self-consistency.
  const Metrics m = evaluate(HeuristicPolicy{}, demos(9, 10, 0.0));
  if (m.sensitivity != 1.0 || m.specificity != 1.0) failed.push_back("oracle self-consistency");

  // Perturbation feasibility and coverage.
  bool pert = true;
  int produced = 0;
  GenConfig c;
  c.num_tasks = 10;
  c.deadline_scale = 2.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    c.rng_seed = seed;
    const auto p = generate_instance(c);
    const Schedule base = demonstrated_schedule(demonstrate(p, 0.0, seed));
    for (PerturbKind kind : {PerturbKind::Swap, PerturbKind::Steal, PerturbKind::Sequence}) {
      for (int count = 1; count <= 3; ++count) {
        try {
          const Schedule s = perturb(p, base, kind, count, derive_seed(seed, "c9/" + to_string(kind)));
          ++produced;
          std::set<TaskId> seen;
          for (const auto& e : s.entries) seen.insert(e.task);
          pert &= s.complete && seen.size() == p.num_tasks() && s.entries.size() == p.num_tasks() &&
                  validate_schedule(p, s).feasible();
        } catch (const PerturbationError&) {
        }
      }
    }
  }
  if (!pert || produced == 0) failed.push_back("perturbation feasibility");

  // Determinism: byte-identical experiment CSVs.
  ExperimentSpec s;
  s.kind = ExperimentKind::AccuracySweep;
  s.demo_counts = {10};
  s.epsilons = {0.1};
  s.replicates = 2;
  std::ostringstream a, b;
  write_rows_csv(run_experiment(s).rows, a);
  write_rows_csv(run_experiment(s).rows, b);
  if (a.str() != b.str() || a.str().empty()) failed.push_back("determinism");

  std::string detail = "symmetry, argmax invariance, oracle 1.0/1.0, perturbation (" + std::to_string(produced) +
                       " schedules), determinism";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else {
      selected.push_back(std::stoi(a));
    }
  }
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"learning accuracy", criterion1},    {"method ordering", criterion2},      {"noise robustness", criterion3},
      {"tuning benefit", criterion4},       {"exactness", criterion5},            {"warm-start dominance", criterion6},
      {"transfer", criterion7},             {"sensitivity-grid structure", criterion8}, {"property suites", criterion9},
  };
  std::filesystem::create_directories(g_out);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first << "): " << v.detail
              << " [" << fmt(secs, 1) << "s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
