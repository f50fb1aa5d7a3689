#include "ueda/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace ueda {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::BO: return "BO";
    case Algorithm::UEDA: return "UEDA";
    case Algorithm::UEDA_AL: return "UEDA_AL";
    case Algorithm::UEDA_NS: return "UEDA_NS";
    case Algorithm::EDALS: return "EDALS";
  }
  return "?";
}

std::string_view to_string(SurrogateKind s) { return s == SurrogateKind::GP ? "GP" : "RF"; }

std::string_view to_string(AcquisitionKind k) {
  switch (k) {
    case AcquisitionKind::EI: return "EI";
    case AcquisitionKind::PI: return "PI";
    case AcquisitionKind::LCB: return "LCB";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::BO, Algorithm::UEDA, Algorithm::UEDA_AL, Algorithm::UEDA_NS,
                 Algorithm::EDALS}) {
    if (s == to_string(a)) return a;
  }
  throw ConfigError(fmt::format("unknown algorithm '{}' (expected BO, UEDA, UEDA_AL, UEDA_NS, EDALS)", s));
}

SurrogateKind parse_surrogate(std::string_view s) {
  if (s == "GP") return SurrogateKind::GP;
  if (s == "RF") return SurrogateKind::RF;
  throw ConfigError(fmt::format("unknown surrogate '{}' (expected GP or RF)", s));
}

AcquisitionKind parse_acquisition(std::string_view s) {
  for (auto k : {AcquisitionKind::EI, AcquisitionKind::PI, AcquisitionKind::LCB}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError(fmt::format("unknown acquisition '{}' (expected EI, PI or LCB)", s));
}

std::size_t OptimizerConfig::initial_samples(std::size_t dim) const {
  if (init_samples) return *init_samples;
  if (algorithm == Algorithm::BO) return std::min<std::size_t>(2 * (dim + 1), 50);
  return pop_size;
}

void OptimizerConfig::validate(std::size_t dim) const {
  const std::size_t init = initial_samples(dim);
  if (algorithm == Algorithm::BO) {
    if (init < 2) throw ConfigError("BO needs init_samples >= 2");
    if (acquisition == AcquisitionKind::LCB && !(lcb_beta > 0.0)) {
      throw ConfigError("LCB needs beta > 0");
    }
    return;
  }
  if (pop_size < 3) throw ConfigError(fmt::format("pop_size must be >= 3, got {}", pop_size));
  if (algorithm == Algorithm::EDALS) return;
  if (o_all_size < 1 || o_all_size > pop_size) {
    throw ConfigError(fmt::format("o_all_size must be in [1, {}], got {}", pop_size, o_all_size));
  }
  if (archive_cap < init) {
    throw ConfigError(fmt::format("archive_cap ({}) must be >= init_samples ({})", archive_cap, init));
  }
}

OptimizerConfig default_config(Algorithm algorithm, SurrogateKind surrogate) {
  OptimizerConfig c;
  c.algorithm = algorithm;
  c.surrogate = surrogate;
  if (algorithm == Algorithm::EDALS) c.pop_size = 30;
  c.o_all_size = c.pop_size / 2;
  return c;
}

std::vector<Vector> latin_hypercube(std::size_t n_samples, const Bounds& bounds, Rng& rng) {
  if (n_samples < 1) throw UsageError("latin_hypercube: need at least one sample");
  const std::size_t d = bounds.dim();
  std::vector<Vector> out(n_samples, Vector(d));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> strata(n_samples);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    const double width = bounds.range(j) / static_cast<double>(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double lo = bounds.lower[j] + static_cast<double>(strata[i]) * width;
      out[i][j] = std::min(lo + unit(rng) * width, bounds.upper[j]);
    }
  }
  return out;
}

SurrogateSelection surrogate_select(const std::vector<Vector>& offspring,
                                    const SurrogateModel& model, std::size_t k) {
  if (k < 1 || k > offspring.size()) {
    throw UsageError(fmt::format("surrogate_select: k={} with {} offspring", k, offspring.size()));
  }
  SurrogateSelection sel;
  sel.predictions = model.predict_batch(offspring);
  std::vector<std::size_t> order(offspring.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sel.predictions[a].mean < sel.predictions[b].mean;
  });
  order.resize(k);
  sel.o_all = std::move(order);
  return sel;
}

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

// Owns the evaluation side of a run: budget checks, noise stream and trace.
class RunRecorder {
 public:
  RunRecorder(const Problem& problem, const OptimizerConfig& config, EvaluationBudget& budget)
      : problem_(problem), budget_(budget), noise_rng_(mix_seed(config.seed ^ kNoiseStream)) {
    result_.config = config;
    result_.seed = config.seed;
    result_.best_f = std::numeric_limits<double>::infinity();
  }

  bool exhausted() const { return budget_.exhausted(); }

  std::optional<double> evaluate(const Vector& x) {
    if (budget_.exhausted()) return std::nullopt;
    const double f = ueda::evaluate(problem_, x, budget_, noise_rng_);
    if (result_.trace.empty() || f < result_.best_f) {
      result_.best_f = f;
      result_.best_x = x;
    }
    result_.trace.push_back(TraceRecord{result_.trace.size() + 1, x, f, result_.best_f});
    return f;
  }

  RunResult finish(std::chrono::steady_clock::time_point start) {
    result_.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(result_);
  }

 private:
  const Problem& problem_;
  EvaluationBudget& budget_;
  Rng noise_rng_;
  RunResult result_;
};

// Evaluates an initial LHS design until it is done or the budget runs out.
Population initial_population(RunRecorder& rec, Dataset& data, const Problem& problem,
                              std::size_t n, Rng& rng) {
  Population pop;
  for (auto& x : latin_hypercube(n, problem.bounds, rng)) {
    const auto f = rec.evaluate(x);
    if (!f) break;
    data.insert(x, *f);
    pop.push_back(Individual::evaluated_at(std::move(x), *f));
  }
  return pop;
}

Population top_of(const Dataset& data, std::size_t n) {
  Population pop;
  for (auto& p : data.best(n)) pop.push_back(Individual::evaluated_at(std::move(p.x), p.y));
  return pop;
}

}  // namespace

RunResult run_bo(const Problem& problem, const OptimizerConfig& config, EvaluationBudget& budget) {
  config.validate(problem.dim);
  const auto start = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  RunRecorder rec(problem, config, budget);
  Dataset data;
  initial_population(rec, data, problem, config.initial_samples(problem.dim), rng);

  while (!rec.exhausted()) {
    const auto model = fit_surrogate(config.surrogate, data, rng(), problem.bounds);
    AcquisitionSpec spec{config.acquisition, config.lcb_beta, data.min_y()};
    Vector x = argmax_acquisition(*model, spec, problem.bounds, rng);
    const auto f = rec.evaluate(x);
    if (!f) break;
    data.insert(std::move(x), *f);
  }
  return rec.finish(start);
}

RunResult run_ueda(const Problem& problem, const OptimizerConfig& config, EvaluationBudget& budget,
                   UedaVariant variant) {
  config.validate(problem.dim);
  const auto start = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  RunRecorder rec(problem, config, budget);
  Dataset archive(config.archive_cap);
  const std::size_t n = config.pop_size;
  Population pop = initial_population(rec, archive, problem, config.initial_samples(problem.dim), rng);

  while (!rec.exhausted()) {
    const auto model = fit_surrogate(config.surrogate, archive, rng(), problem.bounds);
    const auto offspring = generate_offspring(pop, problem.bounds, rng, config.reproduction, n);
    const auto sel = surrogate_select(offspring, *model, config.o_all_size);

    switch (variant) {
      case UedaVariant::Standard: {
        const std::size_t best = sel.o_best();
        const auto f = rec.evaluate(offspring[best]);
        if (!f) break;
        const std::size_t id = archive.insert(offspring[best], *f);
        Population next;
        for (auto& p : archive.best(n)) {
          if (next.size() + sel.o_all.size() >= n) break;
          if (p.id == id) continue;
          next.push_back(Individual::evaluated_at(std::move(p.x), p.y));
        }
        for (std::size_t idx : sel.o_all) {
          next.push_back(idx == best ? Individual::evaluated_at(offspring[idx], *f)
                                     : Individual::predicted_at(offspring[idx], sel.predictions[idx].mean));
        }
        pop = std::move(next);
        break;
      }
      case UedaVariant::AL: {
        for (std::size_t idx : sel.o_all) {
          const auto f = rec.evaluate(offspring[idx]);
          if (!f) break;
          archive.insert(offspring[idx], *f);
        }
        pop = top_of(archive, n);
        break;
      }
      case UedaVariant::NS: {
        const auto f = rec.evaluate(offspring[sel.o_best()]);
        if (!f) break;
        archive.insert(offspring[sel.o_best()], *f);
        pop = top_of(archive, n);
        break;
      }
    }
  }
  return rec.finish(start);
}

RunResult run_edals_baseline(const Problem& problem, const OptimizerConfig& config,
                             EvaluationBudget& budget) {
  config.validate(problem.dim);
  const auto start = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  RunRecorder rec(problem, config, budget);
  Dataset seen;
  const std::size_t n = config.pop_size;
  Population pop = initial_population(rec, seen, problem, config.initial_samples(problem.dim), rng);

  while (!rec.exhausted()) {
    for (auto& x : generate_offspring(pop, problem.bounds, rng, config.reproduction, n)) {
      const auto f = rec.evaluate(x);
      if (!f) break;
      pop.push_back(Individual::evaluated_at(std::move(x), *f));
    }
    sort_population(pop);
    if (pop.size() > n) pop.resize(n);
  }
  return rec.finish(start);
}

RunResult run_optimizer(const Problem& problem, const OptimizerConfig& config,
                        EvaluationBudget& budget) {
  switch (config.algorithm) {
    case Algorithm::BO: return run_bo(problem, config, budget);
    case Algorithm::UEDA: return run_ueda(problem, config, budget, UedaVariant::Standard);
    case Algorithm::UEDA_AL: return run_ueda(problem, config, budget, UedaVariant::AL);
    case Algorithm::UEDA_NS: return run_ueda(problem, config, budget, UedaVariant::NS);
    case Algorithm::EDALS: return run_edals_baseline(problem, config, budget);
  }
  throw UsageError("run_optimizer: unknown algorithm");
}

}  // namespace ueda
