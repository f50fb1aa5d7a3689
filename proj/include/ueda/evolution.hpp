#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ueda/common.hpp"

namespace ueda {

/// Population member. Unevaluated members carry the surrogate's predicted
/// mean from the moment they were selected.
struct Individual {
  Vector x;
  std::optional<double> fitness;
  double predicted = 0.0;

  bool evaluated() const { return fitness.has_value(); }
  /// Ordering key: true fitness if known, else the prediction.
  double key() const { return fitness.value_or(predicted); }

  static Individual evaluated_at(Vector x, double f) { return {std::move(x), f, f}; }
  static Individual predicted_at(Vector x, double mean) { return {std::move(x), std::nullopt, mean}; }
};

using Population = std::vector<Individual>;

/// Stable ascending sort by Individual::key().
void sort_population(Population& pop);

/// Variable-width histogram: per dimension, H bins with edges
/// a_0 = lower < ... < a_H = upper and bin probabilities.
struct VwhModel {
  std::vector<Vector> edges;  // [dim][H + 1]
  std::vector<Vector> probs;  // [dim][H]

  std::size_t dim() const { return edges.size(); }
  std::size_t bins() const { return probs.empty() ? 0 : probs.front().size(); }
  /// Bin index of value v in dimension j (0-based, last bin closed).
  std::size_t bin_of(std::size_t j, double v) const;
};

VwhModel vwh_build(const std::vector<Vector>& xs, const Bounds& bounds, std::size_t bins = 15);
Vector vwh_sample(const VwhModel& model, Rng& rng);

/// Vertex of the parabola through three (coordinate, fitness) pairs; empty
/// when it opens downward, is flat, or coordinates coincide.
std::optional<double> quadratic_local_search(const std::array<double, 3>& xs,
                                             const std::array<double, 3>& fs);

struct ReproductionParams {
  std::size_t bins = 15;          // H
  double best_fraction = 0.2;     // P_b
  double local_search_rate = 0.2; // P_c
};

/// VWH sampling plus per-coordinate quadratic local search over three
/// consecutive top-ranked parents, with boundary repair. Produces `count`
/// offspring (population size when omitted).
std::vector<Vector> generate_offspring(Population population, const Bounds& bounds, Rng& rng,
                                       const ReproductionParams& params = {},
                                       std::optional<std::size_t> count = std::nullopt);

}  // namespace ueda
