#include "ueda/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace ueda {

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= lower[j] && x[j] <= upper[j])) return false;
  }
  return true;
}

Bounds uniform_bounds(std::size_t dim, double lo, double hi) {
  return Bounds{Vector(dim, lo), Vector(dim, hi)};
}

std::uint64_t mix_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EvaluationBudget::EvaluationBudget(std::size_t max_fes) : max_fes_(max_fes) {
  if (max_fes == 0) throw ConfigError("evaluation budget must be positive");
}

void EvaluationBudget::consume() {
  if (used_ >= max_fes_) {
    throw BudgetExhausted(fmt::format("evaluation budget of {} exhausted", max_fes_));
  }
  ++used_;
}

namespace {

using std::numbers::pi;

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double ellipsoid(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(i + 1) * x[i] * x[i];
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = x[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double ackley(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2.0 * pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
}

double griewank(std::span<const double> x) {
  double s = 0.0;
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i] / 4000.0;
    p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return s - p + 1.0;
}

double schwefel_2_22(std::span<const double> x) {
  double s = 0.0;
  double p = 1.0;
  for (double v : x) {
    s += std::abs(v);
    p *= std::abs(v);
  }
  return s + p;
}

double schwefel_1_2(std::span<const double> x) {
  double s = 0.0;
  double prefix = 0.0;
  for (double v : x) {
    prefix += v;
    s += prefix * prefix;
  }
  return s;
}

double schwefel_2_21(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double step(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    const double t = std::floor(v + 0.5);
    s += t * t;
  }
  return s;
}

// Deterministic part of the noisy quartic; the noise term is added by evaluate().
double quartic(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v2 = x[i] * x[i];
    s += static_cast<double>(i + 1) * v2 * v2;
  }
  return s;
}

double schwefel_2_26(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * std::sin(std::sqrt(std::abs(v)));
  return 418.9829 * static_cast<double>(x.size()) - s;
}

double rastrigin(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
  return s;
}

double penalty(double v, double a, double k, double m) {
  if (v > a) return k * std::pow(v - a, m);
  if (v < -a) return k * std::pow(-v - a, m);
  return 0.0;
}

double penalized_1(std::span<const double> x) {
  const std::size_t n = x.size();
  auto y = [&](std::size_t i) { return 1.0 + (x[i] + 1.0) / 4.0; };
  const double s0 = std::sin(pi * y(0));
  double s = 10.0 * s0 * s0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double yi = y(i) - 1.0;
    const double sn = std::sin(pi * y(i + 1));
    s += yi * yi * (1.0 + 10.0 * sn * sn);
  }
  const double yl = y(n - 1) - 1.0;
  s += yl * yl;
  double pen = 0.0;
  for (double v : x) pen += penalty(v, 10.0, 100.0, 4.0);
  return pi / static_cast<double>(n) * s + pen;
}

double penalized_2(std::span<const double> x) {
  const std::size_t n = x.size();
  const double s0 = std::sin(3.0 * pi * x[0]);
  double s = s0 * s0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i] - 1.0;
    const double sn = std::sin(3.0 * pi * x[i + 1]);
    s += d * d * (1.0 + sn * sn);
  }
  const double dl = x[n - 1] - 1.0;
  const double sl = std::sin(2.0 * pi * x[n - 1]);
  s += dl * dl * (1.0 + sl * sl);
  double pen = 0.0;
  for (double v : x) pen += penalty(v, 5.0, 100.0, 4.0);
  return 0.1 * s + pen;
}

struct Entry {
  ProblemInfo info;
  double (*fn)(std::span<const double>);
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"Ellipsoid", "LZG", -5.12, 5.12, false, 0.0}, ellipsoid},
      {{"Rosenbrock", "LZG", -2.048, 2.048, false, 0.0}, rosenbrock},
      {{"Ackley", "LZG", -32.768, 32.768, false, 0.0}, ackley},
      {{"Griewank", "LZG", -600.0, 600.0, false, 0.0}, griewank},
      {{"YLLF01", "YLL", -100.0, 100.0, false, 0.0}, sphere},
      {{"YLLF02", "YLL", -10.0, 10.0, false, 0.0}, schwefel_2_22},
      {{"YLLF03", "YLL", -100.0, 100.0, false, 0.0}, schwefel_1_2},
      {{"YLLF04", "YLL", -100.0, 100.0, false, 0.0}, schwefel_2_21},
      {{"YLLF05", "YLL", -30.0, 30.0, false, 0.0}, rosenbrock},
      {{"YLLF06", "YLL", -100.0, 100.0, false, 0.0}, step},
      {{"YLLF07", "YLL", -1.28, 1.28, true, 0.0}, quartic},
      {{"YLLF08", "YLL", -500.0, 500.0, false, 0.0}, schwefel_2_26},
      {{"YLLF09", "YLL", -5.12, 5.12, false, 0.0}, rastrigin},
      {{"YLLF12", "YLL", -50.0, 50.0, false, 0.0}, penalized_1},
      {{"YLLF13", "YLL", -50.0, 50.0, false, 0.0}, penalized_2},
  };
  return table;
}

}  // namespace

const std::vector<ProblemInfo>& problem_registry() {
  static const std::vector<ProblemInfo> infos = [] {
    std::vector<ProblemInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

Problem make_problem(std::string_view name, std::size_t dim) {
  if (dim < 2) throw ConfigError(fmt::format("problem '{}': dim must be >= 2, got {}", name, dim));
  for (const auto& e : entries()) {
    if (e.info.name != name) continue;
    Problem p;
    p.name = e.info.name;
    p.dim = dim;
    p.bounds = uniform_bounds(dim, e.info.lower, e.info.upper);
    p.noisy = e.info.noisy;
    p.f_star = e.info.f_star;
    p.objective = e.fn;
    return p;
  }
  throw ConfigError(fmt::format("unknown problem '{}'", name));
}

double evaluate(const Problem& problem, std::span<const double> x, EvaluationBudget& budget,
                Rng& rng) {
  if (x.size() != problem.dim) {
    throw UsageError(fmt::format("evaluate: expected dim {}, got {}", problem.dim, x.size()));
  }
  budget.consume();
  double f = problem.objective(x);
  if (problem.noisy) f += std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return f;
}

Vector repair_to_bounds(std::span<const double> x, const Bounds& bounds,
                        std::span<const double> parent) {
  Vector out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (out[j] < bounds.lower[j]) {
      out[j] = 0.5 * (parent[j] + bounds.lower[j]);
    } else if (out[j] > bounds.upper[j]) {
      out[j] = 0.5 * (parent[j] + bounds.upper[j]);
    }
  }
  return out;
}

}  // namespace ueda
