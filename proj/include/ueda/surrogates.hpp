#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ueda/common.hpp"

namespace ueda {

/// Observed (x, y) pairs. With a cap, only the cap-best points by y survive.
class Dataset {
 public:
  struct Point {
    Vector x;
    double y;
    std::size_t id;  // insertion sequence number
  };

  explicit Dataset(std::optional<std::size_t> cap = std::nullopt) : cap_(cap) {}

  /// Appends (x, y) and, when over cap, drops the worst point. Returns the id
  /// given to the new point (it may itself have been dropped).
  std::size_t insert(Vector x, double y);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return points_.empty() ? 0 : points_.front().x.size(); }
  std::optional<std::size_t> cap() const { return cap_; }
  const std::vector<Point>& points() const { return points_; }
  bool contains_id(std::size_t id) const;

  /// Up to k points ordered by ascending y (stable on insertion order).
  std::vector<Point> best(std::size_t k) const;
  double min_y() const;

 private:
  std::vector<Point> points_;
  std::optional<std::size_t> cap_;
  std::size_t next_id_ = 0;
};

struct Prediction {
  double mean = 0.0;
  double std = 0.0;
};

/// Fitted regressor with predictive uncertainty.
class SurrogateModel {
 public:
  virtual ~SurrogateModel() = default;
  virtual std::size_t dim() const = 0;
  virtual Prediction predict(std::span<const double> x) const = 0;
  virtual std::vector<Prediction> predict_batch(const std::vector<Vector>& xs) const;
};

// ---------------------------------------------------------------------------
// Gaussian process

struct GpHyperparameters {
  double length_scale;  // unit-cube input scale
  double signal_std;    // sigma_f, standardized target scale
  double noise_std;     // sigma_n, standardized target scale
};

struct GpGrid {
  std::vector<double> length_scales{0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
  std::vector<double> signal_stds{0.5, 1.0, 2.0};
  std::vector<double> noise_stds{1e-4, 1e-2, 1e-1};
};

/// Zero-mean GP with a squared-exponential kernel on [0,1]-scaled inputs and
/// standardized targets.
class GpModel final : public SurrogateModel {
 public:
  std::size_t dim() const override { return static_cast<std::size_t>(x_offset_.size()); }
  Prediction predict(std::span<const double> x) const override;
  std::vector<Prediction> predict_batch(const std::vector<Vector>& xs) const override;

  const GpHyperparameters& hyperparameters() const { return hyper_; }
  /// Diagonal jitter that made the factorization succeed.
  double jitter() const { return jitter_; }
  double log_marginal_likelihood() const { return lml_; }
  /// Targets are standardized as (y - y_mean) / y_scale.
  double y_mean() const { return y_mean_; }
  double y_scale() const { return y_scale_; }

 private:
  friend GpModel gp_fit_fixed(const Dataset&, const GpHyperparameters&, const std::optional<Bounds>&);
  friend GpModel gp_fit(const Dataset&, const GpGrid&, const std::optional<Bounds>&);

  Eigen::MatrixXd scale_inputs(const std::vector<Vector>& xs) const;

  GpHyperparameters hyper_{};
  double jitter_ = 0.0;
  double lml_ = 0.0;
  Eigen::ArrayXd x_offset_;
  Eigen::ArrayXd x_scale_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  Eigen::MatrixXd train_;  // one scaled training input per column
  Eigen::MatrixXd chol_l_;
  Eigen::VectorXd alpha_;
};

/// Fits by maximizing the log marginal likelihood over `grid`. Needs >= 2 points.
/// Inputs are mapped to the unit cube through `box` when given, otherwise
/// through the per-dimension min/max of the data.
GpModel gp_fit(const Dataset& data, const GpGrid& grid = {},
               const std::optional<Bounds>& box = std::nullopt);
/// Fits with fixed hyperparameters. Needs >= 1 point.
GpModel gp_fit_fixed(const Dataset& data, const GpHyperparameters& hyper,
                     const std::optional<Bounds>& box = std::nullopt);
Prediction gp_predict(const GpModel& model, std::span<const double> x);
double gp_log_marginal_likelihood(const GpModel& model);

// ---------------------------------------------------------------------------
// Random forest

struct RfOptions {
  std::size_t trees = 100;
  std::size_t min_leaf = 2;
  std::uint64_t seed = 0;
};

class RfModel final : public SurrogateModel {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
    std::size_t samples = 0;
  };
  using Tree = std::vector<Node>;

  std::size_t dim() const override { return dim_; }
  Prediction predict(std::span<const double> x) const override;

  /// Individual tree outputs at x, in tree order.
  std::vector<double> tree_predictions(std::span<const double> x) const;
  const std::vector<Tree>& trees() const { return trees_; }
  const std::vector<std::uint64_t>& tree_seeds() const { return tree_seeds_; }
  std::size_t feature_subset() const { return feature_subset_; }

 private:
  friend RfModel rf_fit(const Dataset&, const RfOptions&);

  std::size_t dim_ = 0;
  std::size_t feature_subset_ = 1;
  std::vector<Tree> trees_;
  std::vector<std::uint64_t> tree_seeds_;
};

RfModel rf_fit(const Dataset& data, const RfOptions& options = {});
Prediction rf_predict(const RfModel& model, std::span<const double> x);

enum class SurrogateKind { GP, RF };

/// Fits the requested surrogate; `seed` only matters for RF and `box` only
/// for the GP input scaling.
std::unique_ptr<SurrogateModel> fit_surrogate(SurrogateKind kind, const Dataset& data,
                                              std::uint64_t seed,
                                              const std::optional<Bounds>& box = std::nullopt);

}  // namespace ueda
