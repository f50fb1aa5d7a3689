#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <fmt/format.h>

#include "ueda/surrogates.hpp"

namespace ueda {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

struct Standardized {
  Eigen::ArrayXd x_offset;
  Eigen::ArrayXd x_scale;
  Eigen::MatrixXd x;  // dim x n
  double y_mean = 0.0;
  double y_scale = 1.0;
  Eigen::VectorXd y;
};

Standardized standardize(const Dataset& data, const std::optional<Bounds>& box) {
  const auto& pts = data.points();
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index d = static_cast<Eigen::Index>(data.dim());
  Standardized s;
  Eigen::MatrixXd raw(d, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    raw.col(i) = Eigen::Map<const Eigen::VectorXd>(pts[i].x.data(), d);
    y(i) = pts[i].y;
  }
  if (box) {
    if (box->dim() != static_cast<std::size_t>(d)) throw UsageError("gp_fit: bounds dimension mismatch");
    s.x_offset = Eigen::Map<const Eigen::ArrayXd>(box->lower.data(), d);
    s.x_scale = Eigen::Map<const Eigen::ArrayXd>(box->upper.data(), d) - s.x_offset;
  } else {
    s.x_offset = raw.rowwise().minCoeff().array();
    s.x_scale = raw.rowwise().maxCoeff().array() - s.x_offset;
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(s.x_scale(j) > 0.0)) s.x_scale(j) = 1.0;
  }
  s.x = ((raw.array().colwise() - s.x_offset).colwise() / s.x_scale).matrix();

  s.y_mean = y.mean();
  const double var = (y.array() - s.y_mean).square().mean();
  s.y_scale = var > 0.0 ? std::sqrt(var) : 1.0;
  s.y = (y.array() - s.y_mean) / s.y_scale;
  return s;
}

// Pairwise squared distances between columns of a and b.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::VectorXd an = a.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd bn = b.colwise().squaredNorm();
  Eigen::MatrixXd d = (-2.0 * a.transpose() * b).colwise() + an;
  d.rowwise() += bn;
  return d.cwiseMax(0.0);
}

struct Factorization {
  Eigen::MatrixXd l;
  Eigen::VectorXd alpha;
  double jitter;
  double lml;
};

std::optional<Factorization> factorize(const Eigen::MatrixXd& sq_dist, const Eigen::VectorXd& y,
                                       const GpHyperparameters& h) {
  const Eigen::Index n = y.size();
  const double sf2 = h.signal_std * h.signal_std;
  const double sn2 = h.noise_std * h.noise_std;
  const Eigen::MatrixXd base = sf2 * (-sq_dist.array() / (2.0 * h.length_scale * h.length_scale)).exp();
  for (double jitter = kJitterStart; jitter <= kJitterMax * 1.0000001; jitter *= 10.0) {
    Eigen::MatrixXd k = base;
    k.diagonal().array() += sn2 + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd l = llt.matrixL();
    if (!(l.diagonal().array() > 0.0).all()) continue;
    Eigen::VectorXd alpha = llt.solve(y);
    const double lml = -0.5 * y.dot(alpha) - l.diagonal().array().log().sum() -
                       0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    if (!std::isfinite(lml)) continue;
    return Factorization{std::move(l), std::move(alpha), jitter, lml};
  }
  return std::nullopt;
}

}  // namespace

GpModel gp_fit_fixed(const Dataset& data, const GpHyperparameters& hyper,
                     const std::optional<Bounds>& box) {
  if (data.size() < 1) throw ModelFitError("gp_fit: dataset is empty");
  if (!(hyper.length_scale > 0.0 && hyper.signal_std > 0.0 && hyper.noise_std >= 0.0)) {
    throw ModelFitError("gp_fit: hyperparameters must be positive");
  }
  Standardized s = standardize(data, box);
  const Eigen::MatrixXd sq = squared_distances(s.x, s.x);
  auto f = factorize(sq, s.y, hyper);
  if (!f) throw ModelFitError("gp_fit: kernel matrix not positive definite at max jitter");

  GpModel m;
  m.hyper_ = hyper;
  m.jitter_ = f->jitter;
  m.lml_ = f->lml;
  m.x_offset_ = std::move(s.x_offset);
  m.x_scale_ = std::move(s.x_scale);
  m.y_mean_ = s.y_mean;
  m.y_scale_ = s.y_scale;
  m.train_ = std::move(s.x);
  m.chol_l_ = std::move(f->l);
  m.alpha_ = std::move(f->alpha);
  return m;
}

GpModel gp_fit(const Dataset& data, const GpGrid& grid, const std::optional<Bounds>& box) {
  if (data.size() < 2) {
    throw ModelFitError(fmt::format("gp_fit: need at least 2 points, got {}", data.size()));
  }
  Standardized s = standardize(data, box);
  const Eigen::MatrixXd sq = squared_distances(s.x, s.x);

  std::optional<Factorization> best;
  GpHyperparameters best_h{};
  for (double ell : grid.length_scales) {
    for (double sf : grid.signal_stds) {
      for (double sn : grid.noise_stds) {
        const GpHyperparameters h{ell, sf, sn};
        auto f = factorize(sq, s.y, h);
        if (f && (!best || f->lml > best->lml)) {
          best = std::move(f);
          best_h = h;
        }
      }
    }
  }
  if (!best) throw ModelFitError("gp_fit: no grid cell admitted a Cholesky factorization");

  GpModel m;
  m.hyper_ = best_h;
  m.jitter_ = best->jitter;
  m.lml_ = best->lml;
  m.x_offset_ = std::move(s.x_offset);
  m.x_scale_ = std::move(s.x_scale);
  m.y_mean_ = s.y_mean;
  m.y_scale_ = s.y_scale;
  m.train_ = std::move(s.x);
  m.chol_l_ = std::move(best->l);
  m.alpha_ = std::move(best->alpha);
  return m;
}

Eigen::MatrixXd GpModel::scale_inputs(const std::vector<Vector>& xs) const {
  const Eigen::Index d = x_offset_.size();
  Eigen::MatrixXd q(d, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (static_cast<Eigen::Index>(xs[i].size()) != d) {
      throw UsageError(fmt::format("gp_predict: expected dim {}, got {}", d, xs[i].size()));
    }
    q.col(static_cast<Eigen::Index>(i)) =
        ((Eigen::Map<const Eigen::ArrayXd>(xs[i].data(), d) - x_offset_) / x_scale_).matrix();
  }
  return q;
}

std::vector<Prediction> GpModel::predict_batch(const std::vector<Vector>& xs) const {
  if (xs.empty()) return {};
  const Eigen::MatrixXd q = scale_inputs(xs);
  const double sf2 = hyper_.signal_std * hyper_.signal_std;
  const double ell2 = hyper_.length_scale * hyper_.length_scale;
  const Eigen::MatrixXd ks = sf2 * (-squared_distances(train_, q).array() / (2.0 * ell2)).exp();
  const Eigen::VectorXd mean = ks.transpose() * alpha_;
  const Eigen::MatrixXd v = chol_l_.triangularView<Eigen::Lower>().solve(ks);
  const Eigen::VectorXd reduction = v.colwise().squaredNorm().transpose();

  std::vector<Prediction> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double var = std::max(sf2 - reduction(ii), 0.0);
    out[i].mean = y_mean_ + y_scale_ * mean(ii);
    out[i].std = y_scale_ * std::sqrt(var);
  }
  return out;
}

Prediction GpModel::predict(std::span<const double> x) const {
  return predict_batch({Vector(x.begin(), x.end())}).front();
}

Prediction gp_predict(const GpModel& model, std::span<const double> x) { return model.predict(x); }

double gp_log_marginal_likelihood(const GpModel& model) { return model.log_marginal_likelihood(); }

}  // namespace ueda
