#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "ueda/problems.hpp"

using namespace ueda;

namespace {

// Straight-from-the-definition oracles, written independently of src/.
double u_pen(double x, double a, double k, double m) {
  if (x > a) return k * std::pow(x - a, m);
  if (x < -a) return k * std::pow(-x - a, m);
  return 0.0;
}

double oracle(const std::string& name, const Vector& x) {
  const double pi = std::numbers::pi;
  const std::size_t n = x.size();
  double s = 0.0;
  if (name == "Ellipsoid") {
    for (std::size_t i = 0; i < n; ++i) s += double(i + 1) * x[i] * x[i];
    return s;
  }
  if (name == "Rosenbrock" || name == "YLLF05") {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      s += 100 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(x[i] - 1, 2);
    }
    return s;
  }
  if (name == "Ackley") {
    double sq = 0, cs = 0;
    for (double v : x) { sq += v * v; cs += std::cos(2 * pi * v); }
    return -20 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20 + std::exp(1.0);
  }
  if (name == "Griewank") {
    double p = 1;
    for (std::size_t i = 0; i < n; ++i) { s += x[i] * x[i] / 4000; p *= std::cos(x[i] / std::sqrt(double(i + 1))); }
    return s - p + 1;
  }
  if (name == "YLLF01") { for (double v : x) s += v * v; return s; }
  if (name == "YLLF02") {
    double p = 1;
    for (double v : x) { s += std::abs(v); p *= std::abs(v); }
    return s + p;
  }
  if (name == "YLLF03") {
    for (std::size_t i = 0; i < n; ++i) {
      double inner = 0;
      for (std::size_t j = 0; j <= i; ++j) inner += x[j];
      s += inner * inner;
    }
    return s;
  }
  if (name == "YLLF04") { for (double v : x) s = std::max(s, std::abs(v)); return s; }
  if (name == "YLLF06") { for (double v : x) s += std::pow(std::floor(v + 0.5), 2); return s; }
  if (name == "YLLF07") { for (std::size_t i = 0; i < n; ++i) s += double(i + 1) * std::pow(x[i], 4); return s; }
  if (name == "YLLF08") {
    for (double v : x) s += v * std::sin(std::sqrt(std::abs(v)));
    return 418.9829 * n - s;
  }
  if (name == "YLLF09") { for (double v : x) s += v * v - 10 * std::cos(2 * pi * v) + 10; return s; }
  if (name == "YLLF12") {
    auto y = [&](std::size_t i) { return 1 + (x[i] + 1) / 4; };
    double t = 10 * std::pow(std::sin(pi * y(0)), 2);
    for (std::size_t i = 0; i + 1 < n; ++i) t += std::pow(y(i) - 1, 2) * (1 + 10 * std::pow(std::sin(pi * y(i + 1)), 2));
    t += std::pow(y(n - 1) - 1, 2);
    for (double v : x) s += u_pen(v, 10, 100, 4);
    return pi / n * t + s;
  }
  if (name == "YLLF13") {
    double t = std::pow(std::sin(3 * pi * x[0]), 2);
    for (std::size_t i = 0; i + 1 < n; ++i) t += std::pow(x[i] - 1, 2) * (1 + std::pow(std::sin(3 * pi * x[i + 1]), 2));
    t += std::pow(x[n - 1] - 1, 2) * (1 + std::pow(std::sin(2 * pi * x[n - 1]), 2));
    for (double v : x) s += u_pen(v, 5, 100, 4);
    return 0.1 * t + s;
  }
  FAIL("no oracle for " << name);
  return 0;
}

double eval_once(const Problem& p, const Vector& x) {
  EvaluationBudget b(1);
  Rng rng(0);
  return evaluate(p, x, b, rng);
}

}  // namespace

TEST_CASE("registry lists fifteen problems without YLLF10/11") {
  const auto& reg = problem_registry();
  CHECK(reg.size() == 15);
  for (const auto& info : reg) {
    CHECK(info.name != "YLLF10");
    CHECK(info.name != "YLLF11");
    CHECK(info.lower < info.upper);
    CHECK(info.noisy == (info.name == "YLLF07"));
  }
}

TEST_CASE("make_problem rejects unknown names and small dims") {
  CHECK_THROWS_AS(make_problem("YLLF10", 20), ConfigError);
  CHECK_THROWS_AS(make_problem("YLLF11", 20), ConfigError);
  CHECK_THROWS_AS(make_problem("Sphere", 20), ConfigError);
  CHECK_THROWS_AS(make_problem("Ellipsoid", 1), ConfigError);
  CHECK(make_problem("YLLF07", 20).noisy);
  CHECK_FALSE(make_problem("Ellipsoid", 20).noisy);
}

TEST_CASE("every deterministic problem matches its definition at random points") {
  Rng rng(2024);
  for (const auto& info : problem_registry()) {
    for (std::size_t n : {2u, 5u, 20u}) {
      const Problem p = make_problem(info.name, n);
      REQUIRE(p.dim == n);
      std::uniform_real_distribution<double> u(info.lower, info.upper);
      for (int trial = 0; trial < 20; ++trial) {
        Vector x(n);
        for (double& v : x) v = u(rng);
        const double expect = oracle(info.name, x);
        const double got = p.objective(x);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("known minima") {
  for (std::size_t n : {2u, 20u}) {
    const Vector zero(n, 0.0), ones(n, 1.0), minus(n, -1.0);
    for (const char* name : {"Ellipsoid", "Ackley", "Griewank", "YLLF01", "YLLF02", "YLLF03", "YLLF04",
                             "YLLF06", "YLLF09"}) {
      CHECK(std::abs(eval_once(make_problem(name, n), zero)) <= 1e-9);
    }
    CHECK(eval_once(make_problem("Rosenbrock", n), ones) == 0.0);
    CHECK(eval_once(make_problem("YLLF05", n), ones) == 0.0);
    CHECK(std::abs(eval_once(make_problem("YLLF12", n), minus)) <= 1e-9);
    CHECK(std::abs(eval_once(make_problem("YLLF13", n), ones)) <= 1e-9);
  }
  CHECK(std::abs(eval_once(make_problem("Ackley", 20), Vector(20, 0.0))) <= 1e-12);
}

TEST_CASE("YLLF03 hand value") {
  CHECK(eval_once(make_problem("YLLF03", 2), {1.0, 1.0}) == doctest::Approx(5.0));
}

TEST_CASE("YLLF08 shift keeps values near zero at the optimum") {
  const Problem p = make_problem("YLLF08", 20);
  CHECK(std::abs(eval_once(p, Vector(20, 420.9687))) < 1e-2);
  CHECK(eval_once(p, Vector(20, 0.0)) == doctest::Approx(418.9829 * 20));
}

TEST_CASE("deterministic problems evaluate bit-identically") {
  const Problem p = make_problem("Griewank", 10);
  const Vector x(10, 123.456);
  CHECK(eval_once(p, x) == eval_once(p, x));
}

TEST_CASE("YLLF07 noise lies in [0,1) and follows the generator") {
  const Problem p = make_problem("YLLF07", 5);
  const Vector zero(5, 0.0);
  EvaluationBudget b(200);
  Rng r1(7), r2(7);
  for (int i = 0; i < 100; ++i) {
    const double f = evaluate(p, zero, b, r1);
    CHECK(f >= 0.0);
    CHECK(f < 1.0);
    CHECK(f == evaluate(p, zero, b, r2));
  }
}

TEST_CASE("budget counts every call and refuses the one past the limit") {
  const Problem p = make_problem("Ellipsoid", 3);
  EvaluationBudget b(137);
  Rng rng(0);
  for (int i = 0; i < 137; ++i) evaluate(p, Vector{0.1, 0.2, 0.3}, b, rng);
  CHECK(b.used() == 137);
  CHECK(b.exhausted());
  CHECK(b.remaining() == 0);
  CHECK_THROWS_AS(evaluate(p, Vector{0.1, 0.2, 0.3}, b, rng), BudgetExhausted);
  CHECK(b.used() == 137);
  CHECK_THROWS_AS(EvaluationBudget(0), ConfigError);
}

TEST_CASE("evaluate rejects a dimension mismatch") {
  const Problem p = make_problem("Ellipsoid", 3);
  EvaluationBudget b(5);
  Rng rng(0);
  CHECK_THROWS_AS(evaluate(p, Vector{0.0, 0.0}, b, rng), UsageError);
}

TEST_CASE("repair_to_bounds") {
  const Bounds box = uniform_bounds(3, -10.0, 10.0);
  CHECK(repair_to_bounds(Vector{12.0, 0.0, -12.0}, box, Vector{6.0, 1.0, -4.0}) == Vector{8.0, 0.0, -7.0});
  CHECK(repair_to_bounds(Vector{1.0, 2.0, 3.0}, box, Vector{0.0, 0.0, 0.0}) == Vector{1.0, 2.0, 3.0});
  Rng rng(3);
  std::uniform_real_distribution<double> wild(-100, 100), inside(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const Vector x{wild(rng), wild(rng), wild(rng)};
    const Vector parent{inside(rng), inside(rng), inside(rng)};
    CHECK(box.contains(repair_to_bounds(x, box, parent)));
  }
}
