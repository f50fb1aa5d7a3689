#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ueda/optimizers.hpp"
#include "ueda/stats.hpp"

namespace ueda {

struct ProblemSpec {
  std::string name;
  std::size_t dim = 0;

  std::string label() const;  // e.g. "Ellipsoid_d20"
};

struct AlgorithmEntry {
  std::string id;
  OptimizerConfig config;
};

/// A batch of independent runs. Run r of every cell uses seed base_seed + r.
struct ExperimentSpec {
  std::vector<ProblemSpec> problems;
  std::vector<AlgorithmEntry> algorithms;
  std::size_t runs = 30;
  std::size_t budget = 500;
  std::uint64_t base_seed = 0;
  std::string baseline_id;
  std::filesystem::path output_dir = "results";

  /// Fails fast (ConfigError) on unknown problems/algorithms or bad sizes.
  void validate() const;
};

/// Parses the JSON config; errors name the offending line or field.
ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& file);
std::string experiment_spec_json(const ExperimentSpec& spec);

struct CellResult {
  std::size_t problem = 0;    // index into spec.problems
  std::size_t algorithm = 0;  // index into spec.algorithms
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t fes_used = 0;
  RunResult result;
};

struct ExperimentOutcome {
  ComparisonReport report;
  std::vector<CellResult> cells;  // ordered by (problem, algorithm, run)
};

/// Executes every (problem, algorithm, run) cell on `threads` workers, writes
/// traces, per-group summaries and the report under spec.output_dir.
ExperimentOutcome run_experiment(const ExperimentSpec& spec, std::size_t threads = 0);

/// Rebuilds the report from the summaries persisted by run_experiment.
ComparisonReport load_report(const std::filesystem::path& output_dir);

std::string report_json(const ComparisonReport& report);
std::string report_text(const ComparisonReport& report);

/// File names of persisted artifacts, relative to the output directory.
std::filesystem::path trace_path(const std::string& algo, const ProblemSpec& p, std::uint64_t seed);
std::filesystem::path summary_path(const std::string& algo, const ProblemSpec& p);

struct AblationSpec {
  std::vector<std::string> problems{"Ellipsoid", "Rosenbrock", "Ackley", "Griewank"};
  std::vector<std::size_t> dims{20, 50};
  std::size_t runs = 30;
  std::size_t budget = 500;
  std::uint64_t base_seed = 0;
  std::filesystem::path output_dir = "results/ablation";
};

struct ConvergenceCurve {
  std::string algo;
  ProblemSpec problem;
  Vector mean_best;  // index fe - 1
  Vector std_best;
};

struct AblationOutcome {
  ExperimentSpec experiment;
  ExperimentOutcome outcome;
  std::vector<ConvergenceCurve> curves;

  /// Final best values of every run for one (problem, algorithm) cell.
  std::vector<double> finals(std::size_t problem, std::size_t algorithm) const;
};

/// UEDA-RF, UEDA-RF-AL, UEDA-RF-NS and EDA/LS on shared seeds, with per-FE
/// mean/std convergence curves written as CSV.
AblationOutcome run_ablation(const AblationSpec& spec, std::size_t threads = 0);

/// The four ablation algorithms, in report order.
std::vector<AlgorithmEntry> ablation_algorithms();

}  // namespace ueda
