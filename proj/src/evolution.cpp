#include "ueda/evolution.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ueda/problems.hpp"

namespace ueda {

void sort_population(Population& pop) {
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& a, const Individual& b) { return a.key() < b.key(); });
}

std::size_t VwhModel::bin_of(std::size_t j, double v) const {
  const Vector& a = edges[j];
  const std::size_t h_total = probs[j].size();
  if (v < a[1]) return 0;
  if (v > a[h_total - 1]) return h_total - 1;
  // Middle bins cover the closed interval [a_1, a_{H-1}].
  const double width = (a[h_total - 1] - a[1]) / static_cast<double>(h_total - 2);
  if (!(width > 0.0)) return 1;
  const auto idx = static_cast<std::ptrdiff_t>(std::floor((v - a[1]) / width));
  return 1 + static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(h_total) - 3));
}

VwhModel vwh_build(const std::vector<Vector>& xs, const Bounds& bounds, std::size_t bins) {
  if (bins < 3) throw UsageError(fmt::format("vwh_build: need at least 3 bins, got {}", bins));
  if (xs.size() < 2) throw UsageError("vwh_build: need at least 2 points");
  const std::size_t d = bounds.dim();
  const std::size_t middle = bins - 2;

  VwhModel m;
  m.edges.assign(d, Vector(bins + 1));
  m.probs.assign(d, Vector(bins, 0.0));
  std::vector<double> col(xs.size());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) col[i] = xs[i][j];
    std::sort(col.begin(), col.end());
    const double lo = bounds.lower[j];
    const double hi = bounds.upper[j];
    const std::size_t n = col.size();

    double a1 = std::max(col[0] - 0.5 * (col[1] - col[0]), lo);
    double am = std::min(col[n - 1] + 0.5 * (col[n - 1] - col[n - 2]), hi);
    const bool degenerate = !(am > a1);
    if (degenerate) {
      // Point mass of width 1e-9 * range centred on the common value.
      const double half = 0.5e-9 * (hi - lo);
      a1 = std::max(col[0] - half, lo);
      am = std::min(col[0] + half, hi);
    }

    Vector& a = m.edges[j];
    a[0] = lo;
    a[bins] = hi;
    const double width = (am - a1) / static_cast<double>(middle);
    for (std::size_t h = 1; h < bins - 1; ++h) a[h] = a1 + static_cast<double>(h - 1) * width;
    a[bins - 1] = am;

    Vector counts(bins, 0.0);
    m.probs[j] = counts;  // bin_of needs the bin count
    for (double v : col) counts[m.bin_of(j, v)] += 1.0;
    counts[0] = a[1] > a[0] ? 0.1 : 0.0;
    counts[bins - 1] = a[bins] > a[bins - 1] ? 0.1 : 0.0;
    double total = 0.0;
    for (double c : counts) total += c;
    for (std::size_t h = 0; h < bins; ++h) m.probs[j][h] = counts[h] / total;
  }
  return m;
}

Vector vwh_sample(const VwhModel& model, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(model.dim());
  for (std::size_t j = 0; j < model.dim(); ++j) {
    const Vector& p = model.probs[j];
    const Vector& a = model.edges[j];
    const double u = unit(rng);
    std::size_t h = 0;
    double cum = 0.0;
    std::size_t last_nonzero = 0;
    for (; h < p.size(); ++h) {
      if (p[h] > 0.0) last_nonzero = h;
      cum += p[h];
      if (u < cum && p[h] > 0.0) break;
    }
    if (h == p.size()) h = last_nonzero;
    const double lo = a[h];
    const double hi = a[h + 1];
    x[j] = hi > lo ? std::min(lo + unit(rng) * (hi - lo), hi) : lo;
  }
  return x;
}

std::optional<double> quadratic_local_search(const std::array<double, 3>& xs,
                                             const std::array<double, 3>& fs) {
  constexpr double kEps = 1e-12;
  const auto [x1, x2, x3] = xs;
  const auto [f1, f2, f3] = fs;
  if (std::abs(x1 - x2) <= kEps || std::abs(x1 - x3) <= kEps || std::abs(x2 - x3) <= kEps) {
    return std::nullopt;
  }
  const double s12 = (f1 - f2) / (x1 - x2);
  const double s13 = (f1 - f3) / (x1 - x3);
  const double a = (s12 - s13) / (x2 - x3);
  if (!(a > 0.0)) return std::nullopt;
  const double b = s12 - a * (x1 + x2);
  return -b / (2.0 * a);
}

std::vector<Vector> generate_offspring(Population population, const Bounds& bounds, Rng& rng,
                                       const ReproductionParams& params,
                                       std::optional<std::size_t> count) {
  sort_population(population);
  const std::size_t n = population.size();
  std::vector<Vector> xs;
  xs.reserve(n);
  for (const auto& ind : population) xs.push_back(ind.x);
  const VwhModel model = vwh_build(xs, bounds, params.bins);

  const bool local_search = n >= 3;
  const auto top = static_cast<std::size_t>(std::floor(params.best_fraction * static_cast<double>(n)));
  std::size_t k_max = top >= 3 ? top - 2 : 1;
  if (local_search) k_max = std::min(k_max, n - 2);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> out;
  const std::size_t total = count.value_or(n);
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const Vector sampled = vwh_sample(model, rng);
    Vector u = sampled;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, k_max - 1)(rng);
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (unit(rng) < params.local_search_rate && local_search) {
        const auto vertex = quadratic_local_search(
            {population[k].x[j], population[k + 1].x[j], population[k + 2].x[j]},
            {population[k].key(), population[k + 1].key(), population[k + 2].key()});
        if (vertex) u[j] = *vertex;
      }
    }
    out.push_back(repair_to_bounds(u, bounds, sampled));
  }
  return out;
}

}  // namespace ueda
