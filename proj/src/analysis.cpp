#include "ueda/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ueda/acquisition.hpp"
#include "ueda/evolution.hpp"
#include "ueda/optimizers.hpp"

namespace ueda {

namespace {

constexpr double kLo = 0.0;
constexpr double kHi = 10.0;
constexpr std::size_t kCandidates = 100;
constexpr std::size_t kTopCandidates = 20;

struct Observations {
  Vector x;
  Vector y;
  Dataset data;  // (x, -y) for minimization
};

Observations observe(std::uint64_t seed, double noise_std) {
  Rng rng(seed);
  Observations o;
  const Bounds box{{kLo}, {kHi}};
  for (const auto& p : latin_hypercube(kDemoTrainSize, box, rng)) o.x.push_back(p[0]);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double x : o.x) {
    const double y = x_sin_x(x) + noise_std * noise(rng);
    o.y.push_back(y);
    o.data.insert({x}, -y);
  }
  return o;
}

std::size_t first_argmax(const Vector& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

double x_sin_x(double x) { return x * std::sin(x); }

Problem neg_x_sin_x_problem() {
  Problem p;
  p.name = "NegXSinX";
  p.dim = 1;
  p.bounds = Bounds{{kLo}, {kHi}};
  p.objective = [](std::span<const double> x) { return -x_sin_x(x[0]); };
  return p;
}

DemoGrid demo_fit_1d(std::uint64_t seed, double noise_std) {
  const Observations obs = observe(seed, noise_std);
  const GpModel gp = gp_fit(obs.data, {}, Bounds{{kLo}, {kHi}});
  RfOptions rf_opts;
  rf_opts.seed = mix_seed(seed);
  const RfModel rf = rf_fit(obs.data, rf_opts);

  DemoGrid g;
  g.train_x = obs.x;
  g.train_y = obs.y;
  std::vector<Vector> queries;
  for (std::size_t i = 0; i < kDemoGridSize; ++i) {
    const double x = kLo + (kHi - kLo) * static_cast<double>(i) / static_cast<double>(kDemoGridSize - 1);
    g.xs.push_back(x);
    g.true_f.push_back(x_sin_x(x));
    queries.push_back({x});
  }
  const auto gp_pred = gp.predict_batch(queries);
  const auto rf_pred = rf.predict_batch(queries);
  const double best = obs.data.min_y();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    g.gp_mean.push_back(-gp_pred[i].mean);
    g.gp_std.push_back(gp_pred[i].std);
    g.rf_mean.push_back(-rf_pred[i].mean);
    g.rf_std.push_back(rf_pred[i].std);
    g.ei_gp.push_back(expected_improvement(gp_pred[i], best));
    g.ei_rf.push_back(expected_improvement(rf_pred[i], best));
    g.ei_star_gp.push_back(expected_improvement({gp_pred[i].mean, rf_pred[i].std}, best));
    g.ei_star_rf.push_back(expected_improvement({rf_pred[i].mean, gp_pred[i].std}, best));
  }
  g.next_gp = g.xs[first_argmax(g.ei_gp)];
  g.next_rf = g.xs[first_argmax(g.ei_rf)];
  return g;
}

std::string demo_grid_csv(const DemoGrid& g) {
  std::string out =
      "xs,true_f,gp_mean,gp_std,rf_mean,rf_std,ei_gp,ei_rf,ei_star_gp,ei_star_rf,next_gp,next_rf\n";
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                       g.xs[i], g.true_f[i], g.gp_mean[i], g.gp_std[i], g.rf_mean[i], g.rf_std[i],
                       g.ei_gp[i], g.ei_rf[i], g.ei_star_gp[i], g.ei_star_rf[i], g.next_gp, g.next_rf);
  }
  return out;
}

DensitySamples demo_offspring_density(std::uint64_t seed, std::size_t n_samples,
                                      SurrogateKind surrogate) {
  if (n_samples < 1000) throw UsageError("demo_offspring_density: need at least 1000 samples");
  const Observations obs = observe(seed, kDemoNoiseStd);
  const auto model = fit_surrogate(surrogate, obs.data, mix_seed(seed), Bounds{{kLo}, {kHi}});

  std::vector<Vector> cands;
  for (std::size_t i = 0; i < kCandidates; ++i) {
    cands.push_back({kLo + (kHi - kLo) * static_cast<double>(i) / static_cast<double>(kCandidates - 1)});
  }
  const auto sel = surrogate_select(cands, *model, kTopCandidates);

  Population parents;
  for (std::size_t i = 0; i < obs.x.size(); ++i) {
    parents.push_back(Individual::evaluated_at({obs.x[i]}, -obs.y[i]));
  }
  Population with_all = parents;
  for (std::size_t idx : sel.o_all) {
    with_all.push_back(Individual::predicted_at(cands[idx], sel.predictions[idx].mean));
  }
  Population with_best = parents;
  with_best.push_back(Individual::predicted_at(cands[sel.o_best()], sel.predictions[sel.o_best()].mean));

  DensitySamples out;
  out.surrogate = surrogate;
  for (std::size_t idx : sel.o_all) out.o_all.push_back(cands[idx][0]);
  out.o_best = cands[sel.o_best()][0];

  const Bounds box{{kLo}, {kHi}};
  Rng rng_all(mix_seed(seed ^ 0xa11ULL));
  Rng rng_best(mix_seed(seed ^ 0xbe57ULL));
  for (const auto& x : generate_offspring(with_all, box, rng_all, {}, n_samples)) {
    out.from_all.push_back(x[0]);
  }
  for (const auto& x : generate_offspring(with_best, box, rng_best, {}, n_samples)) {
    out.from_best.push_back(x[0]);
  }
  return out;
}

double mass_in(const Vector& xs, double lo, double hi) {
  if (xs.empty()) return 0.0;
  const auto n = std::count_if(xs.begin(), xs.end(), [&](double v) { return v >= lo && v <= hi; });
  return static_cast<double>(n) / static_cast<double>(xs.size());
}

}  // namespace ueda
