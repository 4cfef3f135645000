#ifndef APSCHED_EXPERIMENTS_HPP
#define APSCHED_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "apsched/bnb.hpp"
#include "apsched/decision_tree.hpp"
#include "apsched/perturb.hpp"
#include "apsched/synthetic.hpp"

namespace apsched {

enum class ExperimentKind { AccuracySweep, BaselineComparison, HyperparameterTuning, CovasBenchmark, SensitivityGrid };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::AccuracySweep;
  std::vector<int> demo_counts{15};
  std::vector<double> epsilons{0.0};
  int replicates = 1;
  /// One seed per replicate. When empty, replicate r uses
  /// derive_seed(master_seed, "replicate/r").
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "results";
  /// Instance distribution for training and benchmark problems; num_tasks
  /// and rng_seed are overwritten per instance.
  GenConfig generator;
  std::vector<std::size_t> min_leaf_grid = default_min_leaf_grid();

  // covas_benchmark
  int num_instances = 20;
  std::vector<int> instance_tasks{8, 9, 10};
  int train_tasks = 10;
  int train_demos = 30;
  BnBOptions bnb;

  // sensitivity_grid; replicates above count perturbation draws per problem
  int problems_per_cell = 5;
  int grid_tasks = 10;
  bool paper_scale = false;  // 15 problems x 5 replicates per cell
  bool include_controls = true;

  /// Throws std::invalid_argument on an unusable spec.
  void check() const;
  std::uint64_t replicate_seed(int replicate) const;
};

/// One metric of one data point. `item` names the instance within the
/// condition (empty for per-condition metrics). An absent value marks a
/// data point that could not be produced.
struct ReportRow {
  std::string experiment;
  std::string condition;
  std::string item;
  std::string metric;
  std::optional<double> value;
  int replicate = 0;
  std::uint64_t seed = 0;
};

struct Report {
  std::string experiment;
  std::vector<ReportRow> rows;
  /// Wall-clock measurements; kept apart so `rows` stay byte-stable.
  std::vector<ReportRow> timing;
  std::vector<std::string> notes;
};

using Logger = std::function<void(const std::string&)>;

Report run_accuracy_sweep(const ExperimentSpec& spec, const Logger& log = {});
Report run_baseline_comparison(const ExperimentSpec& spec, const Logger& log = {});
Report run_hyperparameter_tuning(const ExperimentSpec& spec, const Logger& log = {});
Report run_covas_benchmark(const ExperimentSpec& spec, const Logger& log = {});
Report run_sensitivity_grid(const ExperimentSpec& spec, const Logger& log = {});
Report run_experiment(const ExperimentSpec& spec, const Logger& log = {});

/// Sensitivity-grid problem types: one per branch of the rule cascade.
const std::vector<ProblemType>& grid_problem_types();

struct GridPoint {
  ProblemType type = ProblemType::Mixed;
  std::optional<PerturbKind> kind;  // absent for the unperturbed control
  int count = 0;
  int problem = 0;
  int replicate = 0;

  std::string condition() const;
};

/// Every data point of the grid in run order; controls come after the
/// perturbed cells of their problem type.
std::vector<GridPoint> plan_sensitivity_grid(const ExperimentSpec& spec);

/// Number of distinct perturbed (type, kind, count) cells in a plan.
std::size_t count_grid_cells(const std::vector<GridPoint>& plan);

/// Aggregate of one (experiment, condition, metric) group. Absent values
/// are skipped; stddev is the sample deviation (0 for a single value).
struct SummaryRow {
  std::string experiment;
  std::string condition;
  std::string metric;
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

void write_rows_csv(const std::vector<ReportRow>& rows, std::ostream& out);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
/// Columns experiment, condition, metric, statistic, value.
void write_summary_long_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

/// Writes <name>.csv, <name>_timing.csv, <name>_summary.csv,
/// <name>_summary_long.csv and <name>_notes.txt into `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);

/// Shortest decimal form used in condition labels ("0.2", "15").
std::string label_number(double v);

}  // namespace apsched

#endif  // APSCHED_EXPERIMENTS_HPP
