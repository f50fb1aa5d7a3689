#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ueda/acquisition.hpp"
#include "ueda/evolution.hpp"
#include "ueda/problems.hpp"
#include "ueda/surrogates.hpp"

namespace ueda {

enum class Algorithm { BO, UEDA, UEDA_AL, UEDA_NS, EDALS };

std::string_view to_string(Algorithm a);
std::string_view to_string(SurrogateKind s);
std::string_view to_string(AcquisitionKind k);
Algorithm parse_algorithm(std::string_view s);
SurrogateKind parse_surrogate(std::string_view s);
AcquisitionKind parse_acquisition(std::string_view s);

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::UEDA;
  SurrogateKind surrogate = SurrogateKind::GP;
  std::size_t pop_size = 50;
  std::size_t o_all_size = 25;
  std::size_t archive_cap = 100;
  AcquisitionKind acquisition = AcquisitionKind::EI;
  double lcb_beta = 2.0;
  std::optional<std::size_t> init_samples;  // algorithm default when empty
  std::uint64_t seed = 0;
  ReproductionParams reproduction{};

  /// Resolved initial design size for a problem of dimension `dim`.
  std::size_t initial_samples(std::size_t dim) const;
  /// Throws ConfigError when the invariants do not hold.
  void validate(std::size_t dim) const;
};

/// Defaults for each algorithm: N = 50 and |O_all| = N/2 for the UEDA family,
/// N = 30 for EDA/LS.
OptimizerConfig default_config(Algorithm algorithm, SurrogateKind surrogate = SurrogateKind::GP);

struct TraceRecord {
  std::size_t fe = 0;  // 1-based evaluation index
  Vector x;
  double f = 0.0;
  double best_so_far = 0.0;
};

using ConvergenceTrace = std::vector<TraceRecord>;

struct RunResult {
  ConvergenceTrace trace;
  Vector best_x;
  double best_f = 0.0;
  OptimizerConfig config;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

/// One point per stratum in each dimension, with independent permutations.
std::vector<Vector> latin_hypercube(std::size_t n_samples, const Bounds& bounds, Rng& rng);

/// Smallest `k` offspring by predicted mean, ties by offspring index. The
/// first entry of O_all is O_best.
struct SurrogateSelection {
  std::vector<std::size_t> o_all;  // offspring indices, best first
  std::vector<Prediction> predictions;  // for every offspring
  std::size_t o_best() const { return o_all.front(); }
};
SurrogateSelection surrogate_select(const std::vector<Vector>& offspring,
                                    const SurrogateModel& model, std::size_t k);

enum class UedaVariant { Standard, AL, NS };

RunResult run_bo(const Problem& problem, const OptimizerConfig& config, EvaluationBudget& budget);
RunResult run_ueda(const Problem& problem, const OptimizerConfig& config, EvaluationBudget& budget,
                   UedaVariant variant = UedaVariant::Standard);
RunResult run_edals_baseline(const Problem& problem, const OptimizerConfig& config,
                             EvaluationBudget& budget);

/// Dispatches on config.algorithm.
RunResult run_optimizer(const Problem& problem, const OptimizerConfig& config,
                        EvaluationBudget& budget);

}  // namespace ueda
