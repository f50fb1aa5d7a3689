#include "ueda/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ueda {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(const Prediction& pred, double best_y) {
  const double improvement = best_y - pred.mean;
  if (!(pred.std > 0.0)) return std::max(improvement, 0.0);
  const double z = improvement / pred.std;
  return std::max(improvement * normal_cdf(z) + pred.std * normal_pdf(z), 0.0);
}

double probability_improvement(const Prediction& pred, double best_y) {
  if (!(pred.std > 0.0)) return pred.mean < best_y ? 1.0 : 0.0;
  return normal_cdf((best_y - pred.mean) / pred.std);
}

double lower_confidence_bound(const Prediction& pred, double beta) {
  return pred.mean - std::sqrt(beta) * pred.std;
}

double acquisition_utility(const Prediction& pred, const AcquisitionSpec& spec) {
  switch (spec.kind) {
    case AcquisitionKind::EI:
      return expected_improvement(pred, spec.best_y);
    case AcquisitionKind::PI:
      return probability_improvement(pred, spec.best_y);
    case AcquisitionKind::LCB:
      return -lower_confidence_bound(pred, spec.beta);
  }
  return 0.0;
}

Vector argmax_acquisition(const SurrogateModel& model, const AcquisitionSpec& spec,
                          const Bounds& bounds, Rng& rng, const AcquisitionSearch& search) {
  if (spec.kind == AcquisitionKind::LCB && !(spec.beta > 0.0)) {
    throw UsageError("argmax_acquisition: LCB needs beta > 0");
  }
  const std::size_t d = bounds.dim();
  std::vector<Vector> cands(search.uniform_candidates, Vector(d));
  for (auto& c : cands) {
    for (std::size_t j = 0; j < d; ++j) {
      c[j] = std::uniform_real_distribution<double>(bounds.lower[j], bounds.upper[j])(rng);
    }
  }
  std::vector<double> util;
  util.reserve(search.uniform_candidates + search.local_candidates);
  for (const auto& p : model.predict_batch(cands)) util.push_back(acquisition_utility(p, spec));

  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return util[a] > util[b]; });
  const std::size_t n_leaders = std::min(search.leaders, order.size());

  if (n_leaders > 0 && search.local_candidates > 0) {
    std::vector<Vector> local(search.local_candidates, Vector(d));
    for (std::size_t i = 0; i < local.size(); ++i) {
      const Vector& leader = cands[order[i % n_leaders]];
      for (std::size_t j = 0; j < d; ++j) {
        std::normal_distribution<double> step(0.0, search.local_sigma * bounds.range(j));
        local[i][j] = std::clamp(leader[j] + step(rng), bounds.lower[j], bounds.upper[j]);
      }
    }
    for (const auto& p : model.predict_batch(local)) util.push_back(acquisition_utility(p, spec));
    cands.insert(cands.end(), std::make_move_iterator(local.begin()),
                 std::make_move_iterator(local.end()));
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < util.size(); ++i) {
    if (util[i] > util[best]) best = i;
  }
  return cands[best];
}

}  // namespace ueda
