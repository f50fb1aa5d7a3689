#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "ueda/surrogates.hpp"

namespace ueda {

std::size_t Dataset::insert(Vector x, double y) {
  if (!points_.empty() && x.size() != dim()) {
    throw UsageError(fmt::format("dataset insert: expected dim {}, got {}", dim(), x.size()));
  }
  const std::size_t id = next_id_++;
  points_.push_back(Point{std::move(x), y, id});
  if (cap_ && points_.size() > *cap_) {
    // Drop the worst y; among equal worst, the most recent one.
    auto worst = points_.begin();
    for (auto it = points_.begin(); it != points_.end(); ++it) {
      if (it->y >= worst->y) worst = it;
    }
    points_.erase(worst);
  }
  return id;
}

bool Dataset::contains_id(std::size_t id) const {
  return std::any_of(points_.begin(), points_.end(), [id](const Point& p) { return p.id == id; });
}

std::vector<Dataset::Point> Dataset::best(std::size_t k) const {
  std::vector<Point> sorted = points_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Point& a, const Point& b) { return a.y < b.y; });
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

double Dataset::min_y() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points_) m = std::min(m, p.y);
  return m;
}

std::vector<Prediction> SurrogateModel::predict_batch(const std::vector<Vector>& xs) const {
  std::vector<Prediction> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict(x));
  return out;
}

std::unique_ptr<SurrogateModel> fit_surrogate(SurrogateKind kind, const Dataset& data,
                                              std::uint64_t seed,
                                              const std::optional<Bounds>& box) {
  if (kind == SurrogateKind::GP) return std::make_unique<GpModel>(gp_fit(data, {}, box));
  RfOptions opts;
  opts.seed = seed;
  return std::make_unique<RfModel>(rf_fit(data, opts));
}

}  // namespace ueda
