#pragma once
// Reference implementations shared by the unit and acceptance tests. They use
// different numerics from src/ on purpose.
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "ueda/surrogates.hpp"

namespace ueda::oracle {

// Dense GP oracle with an LU factorization instead of Cholesky.
struct DenseGp {
  Eigen::MatrixXd x;  // d x n, unit-cube scaled
  Eigen::VectorXd y;  // standardized
  double y_mean, y_scale;
  Eigen::MatrixXd k_inv;
  double lml;
  GpHyperparameters h;
  Bounds box;

  double kern(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return h.signal_std * h.signal_std * std::exp(-(a - b).squaredNorm() / (2 * h.length_scale * h.length_scale));
  }
  Eigen::VectorXd scale(const Vector& v) const {
    Eigen::VectorXd s(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) s(j) = (v[j] - box.lower[j]) / box.range(j);
    return s;
  }

  DenseGp(const Dataset& data, GpHyperparameters hyper, Bounds b, double jitter) : h(hyper), box(std::move(b)) {
    const auto n = static_cast<Eigen::Index>(data.size());
    x.resize(static_cast<Eigen::Index>(data.dim()), n);
    Eigen::VectorXd raw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x.col(i) = scale(data.points()[i].x);
      raw(i) = data.points()[i].y;
    }
    y_mean = raw.mean();
    y_scale = std::sqrt((raw.array() - y_mean).square().sum() / double(n));
    if (y_scale == 0.0) y_scale = 1.0;
    y = (raw.array() - y_mean) / y_scale;
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kern(x.col(i), x.col(j));
    k.diagonal().array() += h.noise_std * h.noise_std + jitter;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    k_inv = lu.inverse();
    lml = -0.5 * y.dot(k_inv * y) - 0.5 * std::log(std::abs(lu.determinant())) -
          0.5 * double(n) * std::log(2 * std::numbers::pi);
  }

  Prediction predict(const Vector& q) const {
    const Eigen::VectorXd s = scale(q);
    Eigen::VectorXd ks(x.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i) ks(i) = kern(s, x.col(i));
    const double mu = ks.dot(k_inv * y);
    const double var = std::max(h.signal_std * h.signal_std - ks.dot(k_inv * ks), 0.0);
    return {y_mean + y_scale * mu, y_scale * std::sqrt(var)};
  }
};

// Exact two-sided rank-sum p-value by enumerating every split of the pooled
// mid-ranks into groups of |a| and |b|.
inline double exact_rank_sum_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), na = a.size();
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (double v : pooled) {
      if (v < pooled[i]) ++less;
      if (v == pooled[i]) ++equal;
    }
    ranks[i] = less + (equal + 1) / 2.0;
  }
  const double observed = std::accumulate(ranks.begin(), ranks.begin() + na, 0.0);
  const double expect = na * (n + 1) / 2.0;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + na, true);
  std::size_t total = 0, extreme = 0;
  do {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) w += ranks[i];
    ++total;
    if (std::abs(w - expect) >= std::abs(observed - expect) - 1e-9) ++extreme;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return double(extreme) / double(total);
}

}  // namespace ueda::oracle
