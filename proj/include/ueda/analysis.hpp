#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ueda/common.hpp"
#include "ueda/problems.hpp"
#include "ueda/surrogates.hpp"

namespace ueda {

/// f(x) = x sin(x) on [0, 10]; maximum near x = 7.98 with f = 7.92.
double x_sin_x(double x);

/// The 1-D demo objective as a minimization problem: -x sin(x) on [0, 10].
Problem neg_x_sin_x_problem();

/// Curves over a dense grid of [0, 10] comparing GP and RF fits of x sin(x),
/// their EI, and EI with the two models' uncertainties exchanged. Means are in
/// the original (maximization) orientation.
struct DemoGrid {
  Vector xs;
  Vector true_f;
  Vector gp_mean;
  Vector gp_std;
  Vector rf_mean;
  Vector rf_std;
  Vector ei_gp;
  Vector ei_rf;
  Vector ei_star_gp;  // GP mean, RF std
  Vector ei_star_rf;  // RF mean, GP std
  double next_gp = 0.0;
  double next_rf = 0.0;

  Vector train_x;
  Vector train_y;  // noisy observations of f
};

inline constexpr std::size_t kDemoGridSize = 512;
inline constexpr std::size_t kDemoTrainSize = 7;
inline constexpr double kDemoNoiseStd = 0.3;

DemoGrid demo_fit_1d(std::uint64_t seed, double noise_std = kDemoNoiseStd);

/// CSV with one column per DemoGrid curve plus next_gp/next_rf.
std::string demo_grid_csv(const DemoGrid& grid);

struct DensitySamples {
  SurrogateKind surrogate;
  Vector from_all;   // offspring of P ∪ O_all
  Vector from_best;  // offspring of P ∪ O_best
  Vector o_all;
  double o_best = 0.0;
};

/// Offspring drawn from the seven-point population merged with either the
/// model's top 20 of 100 grid candidates or only its single best.
DensitySamples demo_offspring_density(std::uint64_t seed, std::size_t n_samples,
                                      SurrogateKind surrogate);

/// Fraction of values within [lo, hi].
double mass_in(const Vector& xs, double lo, double hi);

}  // namespace ueda
