#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "ueda/surrogates.hpp"

namespace ueda {

namespace {

struct TreeBuilder {
  const std::vector<Dataset::Point>& pts;
  std::size_t dim;
  std::size_t feature_subset;
  std::size_t min_leaf;
  Rng rng;
  RfModel::Tree nodes;

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double cost = 0.0;
  };

  double mean_of(const std::vector<std::size_t>& idx) const {
    double s = 0.0;
    for (auto i : idx) s += pts[i].y;
    return s / static_cast<double>(idx.size());
  }

  bool constant_targets(const std::vector<std::size_t>& idx) const {
    for (auto i : idx) {
      if (pts[i].y != pts[idx.front()].y) return false;
    }
    return true;
  }

  // Best split on one feature by weighted variance (sum of squared errors).
  std::optional<Split> best_split_on(const std::vector<std::size_t>& idx, std::size_t f) const {
    std::vector<std::size_t> order = idx;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pts[a].x[f] < pts[b].x[f]; });
    const std::size_t n = order.size();
    double total = 0.0;
    double total_sq = 0.0;
    for (auto i : order) {
      total += pts[i].y;
      total_sq += pts[i].y * pts[i].y;
    }
    std::optional<Split> best;
    double left = 0.0;
    double left_sq = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double y = pts[order[k]].y;
      left += y;
      left_sq += y * y;
      const std::size_t nl = k + 1;
      const std::size_t nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double xl = pts[order[k]].x[f];
      const double xr = pts[order[k + 1]].x[f];
      if (!(xl < xr)) continue;
      const double right = total - left;
      const double right_sq = total_sq - left_sq;
      const double cost = (left_sq - left * left / static_cast<double>(nl)) +
                          (right_sq - right * right / static_cast<double>(nr));
      if (!best || cost < best->cost) {
        double thr = 0.5 * (xl + xr);
        if (!(thr > xl && thr <= xr)) thr = xr;  // midpoint rounding onto xl
        best = Split{static_cast<int>(f), thr, cost};
      }
    }
    return best;
  }

  std::int32_t build(const std::vector<std::size_t>& idx) {
    const auto id = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(RfModel::Node{});
    nodes[id].samples = idx.size();
    if (constant_targets(idx)) {
      nodes[id].value = pts[idx.front()].y;
      return id;
    }
    nodes[id].value = mean_of(idx);
    if (idx.size() < 2 * min_leaf) return id;

    // Random feature order: the first `feature_subset` are the candidates;
    // further features are tried only if none of those can split.
    std::vector<std::size_t> features(dim);
    std::iota(features.begin(), features.end(), 0);
    std::shuffle(features.begin(), features.end(), rng);
    std::optional<Split> best;
    for (std::size_t k = 0; k < features.size(); ++k) {
      if (k >= feature_subset && best) break;
      auto s = best_split_on(idx, features[k]);
      if (s && (!best || s->cost < best->cost)) best = s;
    }
    if (!best) return id;

    std::vector<std::size_t> li;
    std::vector<std::size_t> ri;
    for (auto i : idx) {
      (pts[i].x[best->feature] < best->threshold ? li : ri).push_back(i);
    }
    const auto l = build(li);
    const auto r = build(ri);
    nodes[id].feature = best->feature;
    nodes[id].threshold = best->threshold;
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }
};

double tree_predict(const RfModel::Tree& tree, std::span<const double> x) {
  std::int32_t n = 0;
  while (tree[n].feature >= 0) {
    n = x[tree[n].feature] < tree[n].threshold ? tree[n].left : tree[n].right;
  }
  return tree[n].value;
}

}  // namespace

RfModel rf_fit(const Dataset& data, const RfOptions& options) {
  if (options.trees < 1) throw ModelFitError("rf_fit: need at least one tree");
  if (options.min_leaf < 1) throw ModelFitError("rf_fit: min_leaf must be >= 1");
  if (data.size() < options.min_leaf || data.empty()) {
    throw ModelFitError(fmt::format("rf_fit: need at least {} points, got {}", options.min_leaf,
                                    data.size()));
  }
  RfModel m;
  m.dim_ = data.dim();
  m.feature_subset_ = std::max<std::size_t>(1, (m.dim_ + 2) / 3);
  const std::size_t n = data.size();
  for (std::size_t t = 0; t < options.trees; ++t) {
    const std::uint64_t seed = mix_seed(options.seed ^ mix_seed(t));
    TreeBuilder b{data.points(), m.dim_, m.feature_subset_, options.min_leaf, Rng(seed), {}};
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> boot(n);
    for (auto& i : boot) i = pick(b.rng);
    b.build(boot);
    m.trees_.push_back(std::move(b.nodes));
    m.tree_seeds_.push_back(seed);
  }
  return m;
}

std::vector<double> RfModel::tree_predictions(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw UsageError(fmt::format("rf_predict: expected dim {}, got {}", dim_, x.size()));
  }
  std::vector<double> out;
  out.reserve(trees_.size());
  for (const auto& t : trees_) out.push_back(tree_predict(t, x));
  return out;
}

Prediction RfModel::predict(std::span<const double> x) const {
  const auto preds = tree_predictions(x);
  const double n = static_cast<double>(preds.size());
  const auto [lo, hi] = std::minmax_element(preds.begin(), preds.end());
  const double mean = std::clamp(std::accumulate(preds.begin(), preds.end(), 0.0) / n, *lo, *hi);
  double var = 0.0;
  for (double p : preds) var += (p - mean) * (p - mean);
  return Prediction{mean, std::sqrt(var / n)};
}

Prediction rf_predict(const RfModel& model, std::span<const double> x) { return model.predict(x); }

}  // namespace ueda
