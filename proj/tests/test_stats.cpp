#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ueda/common.hpp"
#include "ueda/stats.hpp"

using namespace ueda;

TEST_CASE("rank-sum examples") {
  const std::vector<double> a{1, 2, 3}, b{10, 11, 12};
  CHECK(oracle::exact_rank_sum_p(a, b) == doctest::Approx(0.1));
  CHECK(std::abs(wilcoxon_rank_sum(a, b) - oracle::exact_rank_sum_p(a, b)) <= 0.02);
  CHECK(wilcoxon_rank_sum(a, a) == 1.0);
  const std::vector<double> same{5, 5, 5, 5};
  CHECK(wilcoxon_rank_sum(same, same) == 1.0);
}

TEST_CASE("rank-sum requires three values per sample") {
  const std::vector<double> two{1, 2}, three{1, 2, 3};
  CHECK_THROWS_AS(wilcoxon_rank_sum(two, three), std::invalid_argument);
  CHECK_THROWS_AS(wilcoxon_rank_sum(three, two), std::invalid_argument);
}

TEST_CASE("rank-sum p-value hand value with ties") {
  // Pooled ranks: a={1,2.5,2.5,4}, b={5,6,7.5,7.5}; W=10, E=18,
  // var = 16*9/12 - 16*(2*(8-2))/(12*8*7) = 12 - 0.142857..., z=(8-0.5)/sqrt(var).
  const std::vector<double> a{1, 2, 2, 3}, b{4, 5, 6, 6};
  const double var = 12.0 - 16.0 * 12.0 / (12.0 * 56.0);
  const double z = 7.5 / std::sqrt(var);
  const double p = std::erfc(z / std::sqrt(2.0));
  CHECK(wilcoxon_rank_sum(a, b) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("rank-sum is symmetric and rank-invariant") {
  Rng rng(3);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(7), b(9);
    for (double& v : a) v = z(rng);
    for (double& v : b) v = z(rng) + 0.5;
    const double p = wilcoxon_rank_sum(a, b);
    CHECK(p == doctest::Approx(wilcoxon_rank_sum(b, a)).epsilon(1e-14));
    std::vector<double> ea, eb;
    for (double v : a) ea.push_back(std::exp(3 * v));
    for (double v : b) eb.push_back(std::exp(3 * v));
    CHECK(p == doctest::Approx(wilcoxon_rank_sum(ea, eb)).epsilon(1e-14));
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("rank-sum approximation tracks the exact test at moderate sizes") {
  Rng rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(9), b(9);
    for (double& v : a) v = z(rng);
    for (double& v : b) v = z(rng) + 0.7;
    CHECK(std::abs(wilcoxon_rank_sum(a, b) - oracle::exact_rank_sum_p(a, b)) <= 0.02);
  }
}

TEST_CASE("rank-sum rejection rate is calibrated under the null") {
  Rng rng(2024);
  std::normal_distribution<double> z(0.0, 1.0);
  int reject = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> a(30), b(30);
    for (double& v : a) v = z(rng);
    for (double& v : b) v = z(rng);
    if (wilcoxon_rank_sum(a, b) < 0.05) ++reject;
  }
  CHECK(reject >= 30);
  CHECK(reject <= 70);
}

TEST_CASE("significance marks") {
  const std::vector<double> lo{1, 2, 3, 4, 5, 6}, hi{11, 12, 13, 14, 15, 16};
  CHECK(significance_mark(lo, hi) == Mark::Better);
  CHECK(significance_mark(hi, lo) == Mark::Worse);
  CHECK(significance_mark(lo, lo) == Mark::Similar);
  const std::vector<double> two{1, 2};
  CHECK(significance_mark(two, hi) == Mark::Similar);
  CHECK(to_string(Mark::Better) == "+");
  CHECK(to_string(Mark::Worse) == "-");
  CHECK(to_string(Mark::Similar) == "≈");
}

TEST_CASE("summary statistics") {
  const std::vector<double> v{4, 1, 3, 2};
  CHECK(median(v) == 2.5);
  CHECK(mean(v) == 2.5);
  CHECK(sample_std(v) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const std::vector<double> one{7};
  CHECK(sample_std(one) == 0.0);
  CHECK(median(one) == 7.0);
}

TEST_CASE("average ranks and mean rank") {
  CHECK(average_ranks(std::vector<double>{2, 1, 3}) == std::vector<double>{2, 1, 3});
  CHECK(average_ranks(std::vector<double>{1, 1, 3}) == std::vector<double>{1.5, 1.5, 3});
  CHECK(mean_rank({{2, 1, 3}}) == std::vector<double>{2, 1, 3});
  CHECK(mean_rank({{1, 2}, {2, 1}}) == std::vector<double>{1.5, 1.5});
  CHECK(mean_rank({{5, 5}, {1, 2}}) == std::vector<double>{1.25, 1.75});
  CHECK_THROWS_AS(mean_rank({{1, 2}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(mean_rank({}), std::invalid_argument);
  // Per-problem monotone transforms leave mean ranks unchanged.
  const std::vector<std::vector<double>> m{{0.3, 2.0, 1.1}, {5.0, 4.0, 6.0}};
  std::vector<std::vector<double>> t = m;
  for (double& v : t[0]) v = std::exp(v);
  for (double& v : t[1]) v = v * v * v - 100;
  CHECK(mean_rank(m) == mean_rank(t));
}

TEST_CASE("build_report fills cells, marks and tallies") {
  const std::vector<std::vector<std::vector<double>>> samples{
      {{1, 2, 3, 4, 5}, {11, 12, 13, 14, 15}, {1, 2, 3, 4, 5}},
      {{9, 9, 9, 9, 9}, {1, 1, 1, 1, 1}, {20, 21, 22, 23, 24}},
  };
  const auto r = build_report({"P1", "P2"}, {"A", "B", "C"}, "A", samples);
  CHECK(r.baseline == "A");
  CHECK(r.direction_statistic == "median");
  CHECK(r.cells[0][0].mean == 3.0);
  CHECK(r.cells[0][0].median == 3.0);
  CHECK(r.cells[0][0].std == doctest::Approx(std::sqrt(2.5)));
  CHECK_FALSE(r.cells[0][0].mark);
  CHECK(r.cells[0][1].mark == Mark::Worse);
  CHECK(r.cells[0][2].mark == Mark::Similar);
  CHECK(r.cells[1][1].mark == Mark::Better);
  CHECK(r.cells[1][2].mark == Mark::Worse);
  CHECK(r.cells[0][0].rank == 1.5);
  CHECK(r.cells[0][2].rank == 1.5);
  CHECK(r.mean_ranks == std::vector<double>{1.75, 2.0, 2.25});
  CHECK_FALSE(r.tallies[0]);
  CHECK(r.tallies[1]->better == 1);
  CHECK(r.tallies[1]->worse == 1);
  CHECK(r.tallies[2]->similar == 1);
  CHECK(r.tallies[2]->worse == 1);
  CHECK(r.warnings.empty());
}

TEST_CASE("build_report with single runs marks everything similar and warns") {
  const auto r = build_report({"P"}, {"A", "B"}, "A", {{{1.0}, {2.0}}});
  CHECK(r.cells[0][1].mark == Mark::Similar);
  CHECK(r.cells[0][1].std == 0.0);
  CHECK_FALSE(r.warnings.empty());
}
