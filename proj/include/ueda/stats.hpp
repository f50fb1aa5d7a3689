#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ueda {

/// Two-sided Wilcoxon rank-sum p-value (normal approximation with tie and
/// continuity corrections). Returns 1 when every value is identical.
double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

enum class Mark { Better, Worse, Similar };

std::string_view to_string(Mark m);  // "+", "-", "≈"

/// '+' when `a` is significantly better (lower median) than `b` at `alpha`.
/// Samples smaller than 3 cannot be tested and give Similar.
Mark significance_mark(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

double median(std::span<const double> v);
double mean(std::span<const double> v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_std(std::span<const double> v);

/// Average ranks (1 = smallest) with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// means[p][a]: per-problem ranks, averaged over problems for each algorithm.
/// Throws std::invalid_argument on a ragged or empty matrix.
std::vector<double> mean_rank(const std::vector<std::vector<double>>& means);

struct ReportCell {
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
  double rank = 0.0;
  std::optional<Mark> mark;  // empty for the baseline column
};

struct Tally {
  int better = 0;
  int worse = 0;
  int similar = 0;
};

struct ComparisonReport {
  std::vector<std::string> problems;    // row labels
  std::vector<std::string> algorithms;  // column labels
  std::string baseline;
  std::string direction_statistic = "median";
  double alpha = 0.05;
  std::vector<std::vector<ReportCell>> cells;  // [problem][algorithm]
  std::vector<double> mean_ranks;
  std::vector<std::optional<Tally>> tallies;   // empty for the baseline
  std::vector<std::string> warnings;
};

/// samples[p][a] holds the final best values of every run.
ComparisonReport build_report(const std::vector<std::string>& problems,
                              const std::vector<std::string>& algorithms,
                              const std::string& baseline,
                              const std::vector<std::vector<std::vector<double>>>& samples,
                              double alpha = 0.05);

}  // namespace ueda
