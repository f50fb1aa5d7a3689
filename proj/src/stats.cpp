#include "ueda/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace ueda {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  if (n1 < 3 || n2 < 3) throw std::invalid_argument("wilcoxon_rank_sum: samples need at least 3 values");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = average_ranks(pooled);
  const double w = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0);

  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double big_n = dn1 + dn2;
  // Tie correction: sum of (t^3 - t) over tie groups.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  const double var = dn1 * dn2 / 12.0 * ((big_n + 1.0) - ties / (big_n * (big_n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double expected = dn1 * (big_n + 1.0) / 2.0;
  const double dev = std::max(std::abs(w - expected) - 0.5, 0.0);
  const double z = dev / std::sqrt(var);
  return std::clamp(std::erfc(z / std::numbers::sqrt2), 0.0, 1.0);
}

std::string_view to_string(Mark m) {
  switch (m) {
    case Mark::Better: return "+";
    case Mark::Worse: return "-";
    case Mark::Similar: return "≈";
  }
  return "?";
}

double median(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty sample");
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Mark significance_mark(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 3 || b.size() < 3) return Mark::Similar;
  if (wilcoxon_rank_sum(a, b) >= alpha) return Mark::Similar;
  return median(a) < median(b) ? Mark::Better : Mark::Worse;
}

std::vector<double> mean_rank(const std::vector<std::vector<double>>& means) {
  if (means.empty() || means.front().empty()) {
    throw std::invalid_argument("mean_rank: empty result matrix");
  }
  const std::size_t k = means.front().size();
  std::vector<double> total(k, 0.0);
  for (const auto& row : means) {
    if (row.size() != k) throw std::invalid_argument("mean_rank: missing cells in result matrix");
    const auto r = average_ranks(row);
    for (std::size_t a = 0; a < k; ++a) total[a] += r[a];
  }
  for (auto& t : total) t /= static_cast<double>(means.size());
  return total;
}

ComparisonReport build_report(const std::vector<std::string>& problems,
                              const std::vector<std::string>& algorithms,
                              const std::string& baseline,
                              const std::vector<std::vector<std::vector<double>>>& samples,
                              double alpha) {
  const auto base_it = std::find(algorithms.begin(), algorithms.end(), baseline);
  if (base_it == algorithms.end()) {
    throw std::invalid_argument(fmt::format("baseline '{}' is not among the algorithms", baseline));
  }
  const auto base = static_cast<std::size_t>(base_it - algorithms.begin());
  if (samples.size() != problems.size()) throw std::invalid_argument("report: missing problem rows");

  ComparisonReport r;
  r.problems = problems;
  r.algorithms = algorithms;
  r.baseline = baseline;
  r.alpha = alpha;
  r.cells.assign(problems.size(), std::vector<ReportCell>(algorithms.size()));
  r.tallies.assign(algorithms.size(), Tally{});
  r.tallies[base].reset();

  std::vector<std::vector<double>> means(problems.size(), std::vector<double>(algorithms.size()));
  bool warned = false;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    if (samples[p].size() != algorithms.size()) {
      throw std::invalid_argument(fmt::format("report: missing cells for problem '{}'", problems[p]));
    }
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      const auto& s = samples[p][a];
      if (s.empty()) {
        throw std::invalid_argument(
            fmt::format("report: no runs for {} on {}", algorithms[a], problems[p]));
      }
      auto& cell = r.cells[p][a];
      cell.mean = mean(s);
      cell.std = sample_std(s);
      cell.median = median(s);
      means[p][a] = cell.mean;
      if (a == base) continue;
      if ((s.size() < 3 || samples[p][base].size() < 3) && !warned) {
        r.warnings.push_back("fewer than 3 runs per cell: rank-sum test skipped, marks set to ≈");
        warned = true;
      }
      cell.mark = significance_mark(s, samples[p][base], alpha);
      auto& t = *r.tallies[a];
      switch (*cell.mark) {
        case Mark::Better: ++t.better; break;
        case Mark::Worse: ++t.worse; break;
        case Mark::Similar: ++t.similar; break;
      }
    }
    const auto ranks = average_ranks(means[p]);
    for (std::size_t a = 0; a < algorithms.size(); ++a) r.cells[p][a].rank = ranks[a];
  }
  r.mean_ranks = mean_rank(means);
  return r;
}

}  // namespace ueda
