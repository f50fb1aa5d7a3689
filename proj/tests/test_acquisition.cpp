#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "ueda/acquisition.hpp"
#include "ueda/analysis.hpp"

using namespace ueda;

namespace {

// Deterministic test model: mean = g(x), std = s(x).
class FnModel final : public SurrogateModel {
 public:
  FnModel(std::size_t d, std::function<double(std::span<const double>)> mean,
          std::function<double(std::span<const double>)> sd)
      : d_(d), mean_(std::move(mean)), sd_(std::move(sd)) {}
  std::size_t dim() const override { return d_; }
  Prediction predict(std::span<const double> x) const override { return {mean_(x), sd_(x)}; }

 private:
  std::size_t d_;
  std::function<double(std::span<const double>)> mean_, sd_;
};

double quad(std::span<const double> x) {
  return 2.0 * (x[0] - 1.3) * (x[0] - 1.3) + 0.5 * (x[1] + 0.7) * (x[1] + 0.7);
}

}  // namespace

TEST_CASE("normal pdf and cdf") {
  CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi)));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429));
  CHECK(normal_cdf(-40.0) >= 0.0);
}

TEST_CASE("expected improvement examples") {
  CHECK(expected_improvement({0.0, 1.0}, 0.0) == doctest::Approx(0.3989422804014327));
  CHECK(expected_improvement({1.0, 0.0}, 0.0) == 0.0);
  CHECK(expected_improvement({-3.0, 0.0}, 0.0) == doctest::Approx(3.0));
  CHECK(expected_improvement({-3.0, 1e-9}, 0.0) == doctest::Approx(3.0));
  CHECK(expected_improvement({40.0, 1.0}, 0.0) >= 0.0);
}

TEST_CASE("EI is strictly increasing in sigma when the mean is worse than the incumbent") {
  double prev = expected_improvement({1.0, 0.05}, 0.0);
  for (double s = 0.1; s <= 5.0; s += 0.1) {
    const double ei = expected_improvement({1.0, s}, 0.0);
    CHECK(ei > prev);
    prev = ei;
  }
}

TEST_CASE("EI agrees with a Monte Carlo estimate") {
  Rng rng(123);
  std::normal_distribution<double> z(0.0, 1.0);
  for (auto [mu, sd, best] : {std::tuple{0.3, 1.2, 0.0}, std::tuple{-1.0, 0.4, 0.2}, std::tuple{2.0, 3.0, 1.0}}) {
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = std::max(best - (mu + sd * z(rng)), 0.0);
      sum += v;
      sq += v * v;
    }
    const double m = sum / n;
    const double se = std::sqrt((sq / n - m * m) / n);
    CHECK(std::abs(expected_improvement({mu, sd}, best) - m) <= 3 * se);
  }
}

TEST_CASE("probability of improvement examples") {
  CHECK(probability_improvement({0.0, 1.0}, 0.0) == doctest::Approx(0.5));
  CHECK(probability_improvement({-2.0, 2.0}, 0.0) == doctest::Approx(0.8413447460685429));
  CHECK(probability_improvement({1e6, 1.0}, 0.0) == doctest::Approx(0.0));
  CHECK(probability_improvement({-1.0, 0.0}, 0.0) == 1.0);
  CHECK(probability_improvement({1.0, 0.0}, 0.0) == 0.0);
}

TEST_CASE("lower confidence bound examples") {
  CHECK(lower_confidence_bound({1.0, 2.0}, 4.0) == doctest::Approx(-3.0));
  CHECK(lower_confidence_bound({1.5, 0.0}, 4.0) == 1.5);
  double prev = lower_confidence_bound({1.0, 0.7}, 0.1);
  for (double beta = 0.2; beta < 10.0; beta += 0.3) {
    const double v = lower_confidence_bound({1.0, 0.7}, beta);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(acquisition_utility({1.0, 2.0}, {AcquisitionKind::LCB, 4.0, 0.0}) == doctest::Approx(3.0));
}

TEST_CASE("argmax_acquisition breaks a total tie with the first uniform candidate") {
  const Bounds box{{-1.0, 2.0}, {3.0, 5.0}};
  const FnModel flat(2, [](auto) { return 1.0; }, [](auto) { return 0.0; });
  Rng rng(99);
  const Vector got = argmax_acquisition(flat, {AcquisitionKind::EI, 2.0, 0.0}, box, rng);
  Rng replay(99);
  Vector first(2);
  for (std::size_t j = 0; j < 2; ++j) {
    first[j] = std::uniform_real_distribution<double>(box.lower[j], box.upper[j])(replay);
  }
  CHECK(got == first);
}

TEST_CASE("argmax_acquisition finds the minimizer of a noiseless quadratic under LCB") {
  const Bounds box = uniform_bounds(2, -3.0, 3.0);
  const FnModel model(2, quad, [](auto) { return 0.0; });
  Rng rng(4);
  const Vector x = argmax_acquisition(model, {AcquisitionKind::LCB, 2.0, 0.0}, box, rng);
  // Dense grid oracle.
  double best = 1e300;
  Vector arg(2);
  for (int i = 0; i <= 600; ++i)
    for (int j = 0; j <= 600; ++j) {
      const Vector q{-3.0 + i * 0.01, -3.0 + j * 0.01};
      if (quad(q) < best) { best = quad(q); arg = q; }
    }
  CHECK(std::abs(x[0] - arg[0]) < 0.05);
  CHECK(std::abs(x[1] - arg[1]) < 0.1);
  CHECK(quad(x) - best < 5e-3);
  CHECK(box.contains(x));
}

TEST_CASE("argmax_acquisition is invariant to strictly increasing transforms") {
  const Bounds box = uniform_bounds(2, -3.0, 3.0);
  const FnModel raw(2, quad, [](auto) { return 0.0; });
  const FnModel warped(2, [](std::span<const double> x) { return std::exp(0.3 * quad(x)) + 5.0; },
                       [](auto) { return 0.0; });
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng a(seed), b(seed);
    CHECK(argmax_acquisition(raw, {AcquisitionKind::LCB, 2.0, 0.0}, box, a) ==
          argmax_acquisition(warped, {AcquisitionKind::LCB, 2.0, 0.0}, box, b));
  }
}

TEST_CASE("argmax_acquisition is deterministic for a seed") {
  const Bounds box = uniform_bounds(3, 0.0, 1.0);
  const FnModel model(3, [](std::span<const double> x) { return std::sin(5 * x[0]) + x[1] * x[2]; },
                      [](std::span<const double> x) { return 0.1 + x[0]; });
  Rng a(8), b(8);
  CHECK(argmax_acquisition(model, {AcquisitionKind::EI, 2.0, 0.0}, box, a) ==
        argmax_acquisition(model, {AcquisitionKind::EI, 2.0, 0.0}, box, b));
}

TEST_CASE("EI search on the 1-D demo GP lands near the optimum") {
  Dataset data;
  for (double x : {0.6, 2.2, 3.9, 5.1, 6.4, 7.4, 9.3}) data.insert({x}, -x_sin_x(x));
  const GpModel gp = gp_fit(data, {}, Bounds{{0.0}, {10.0}});
  Rng rng(0);
  const Vector x = argmax_acquisition(gp, {AcquisitionKind::EI, 2.0, data.min_y()}, Bounds{{0.0}, {10.0}}, rng);
  CHECK(std::abs(x[0] - 7.99) < 1.0);
}
