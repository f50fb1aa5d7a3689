#pragma once

#include "ueda/common.hpp"
#include "ueda/surrogates.hpp"

namespace ueda {

enum class AcquisitionKind { EI, PI, LCB };

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::EI;
  double beta = 2.0;  // LCB only
  double best_y = 0.0;
};

double normal_pdf(double z);
double normal_cdf(double z);

// All acquisitions are oriented for minimization of the objective.

/// E[max(best_y - Y, 0)] for Y ~ N(mean, std^2).
double expected_improvement(const Prediction& pred, double best_y);
/// P(Y < best_y).
double probability_improvement(const Prediction& pred, double best_y);
/// mean - sqrt(beta) * std; lower is better.
double lower_confidence_bound(const Prediction& pred, double beta);

/// Acquisition as a utility where larger is better (-LCB for LCB).
double acquisition_utility(const Prediction& pred, const AcquisitionSpec& spec);

struct AcquisitionSearch {
  std::size_t uniform_candidates = 2048;
  std::size_t local_candidates = 512;
  std::size_t leaders = 10;
  double local_sigma = 0.05;  // fraction of the range per dimension
};

/// Random multi-start maximization of the acquisition utility. Uniform
/// candidates are drawn first (row by row), then Gaussian perturbations of the
/// current leaders clipped to the box. Ties go to the lowest candidate index.
Vector argmax_acquisition(const SurrogateModel& model, const AcquisitionSpec& spec,
                          const Bounds& bounds, Rng& rng, const AcquisitionSearch& search = {});

}  // namespace ueda
