#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ueda/common.hpp"

namespace ueda {

/// Box-constrained minimization problem. Immutable once built.
struct Problem {
  std::string name;
  std::size_t dim = 0;
  Bounds bounds;
  bool noisy = false;  // adds uniform[0,1) per evaluation
  std::optional<double> f_star;
  std::function<double(std::span<const double>)> objective;
};

/// Counts true objective calls for a single run.
class EvaluationBudget {
 public:
  explicit EvaluationBudget(std::size_t max_fes);

  std::size_t max_fes() const { return max_fes_; }
  std::size_t used() const { return used_; }
  std::size_t remaining() const { return max_fes_ - used_; }
  bool exhausted() const { return used_ >= max_fes_; }

  /// Claims one evaluation; throws BudgetExhausted when none is left.
  void consume();

 private:
  std::size_t max_fes_;
  std::size_t used_ = 0;
};

/// Registry entry used by `list-problems`.
struct ProblemInfo {
  std::string name;
  std::string suite;
  double lower;
  double upper;
  bool noisy;
  double f_star;
};

const std::vector<ProblemInfo>& problem_registry();

/// Builds a registered LZG/YLL benchmark. Throws ConfigError for unknown
/// names (including YLLF10/YLLF11) and for dim < 2.
Problem make_problem(std::string_view name, std::size_t dim);

/// True objective call. `rng` feeds the noise term of noisy problems.
double evaluate(const Problem& problem, std::span<const double> x,
                EvaluationBudget& budget, Rng& rng);

/// Replaces every out-of-bounds coordinate j with the midpoint between
/// parent[j] and the violated bound.
Vector repair_to_bounds(std::span<const double> x, const Bounds& bounds,
                        std::span<const double> parent);

}  // namespace ueda
