#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ueda {

using Vector = std::vector<double>;
using Rng = std::mt19937_64;

/// Invalid user-supplied configuration (unknown names, bad sizes, malformed files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// API misuse such as a dimension mismatch.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when the true objective is called after the budget is spent.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A surrogate could not be fitted (e.g. factorization failed at max jitter).
class ModelFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box [lower, upper].
struct Bounds {
  Vector lower;
  Vector upper;

  std::size_t dim() const { return lower.size(); }
  double range(std::size_t j) const { return upper[j] - lower[j]; }
  bool contains(std::span<const double> x) const;
};

/// Uniform box of dimension `dim`.
Bounds uniform_bounds(std::size_t dim, double lo, double hi);

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed);

}  // namespace ueda
