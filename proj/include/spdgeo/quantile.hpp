#ifndef SPDGEO_QUANTILE_HPP
#define SPDGEO_QUANTILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "spdgeo/radial.hpp"

namespace spdgeo {

/// Index of a geometric quantile: magnitude beta in [0,1) and a boundary
/// direction.
struct QuantileIndex {
  QuantileIndex(double beta_in, BoundaryDirection xi_in);

  double beta;
  BoundaryDirection xi;
};

/// Nonempty sample of SPD points of uniform dimension with per-point labels.
class Dataset {
public:
  explicit Dataset(std::vector<SpdPoint> points, std::vector<std::string> labels = {});

  Index size() const { return static_cast<Index>(points_.size()); }
  Index dim() const { return points_.front().dim(); }
  const SpdPoint& point(Index i) const { return points_[static_cast<size_t>(i)]; }
  const std::string& label(Index i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<SpdPoint>& points() const { return points_; }

private:
  std::vector<SpdPoint> points_;
  std::vector<std::string> labels_;
};

struct TreatmentPair {
  TreatmentPair(SpdPoint control_in, SpdPoint treated_in);

  SpdPoint control;
  SpdPoint treated;
};

struct OptimizerSettings {
  double tolerance = 1e-8;     // metric gradient norm target
  int max_iter = 500;
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  double fd_step = 1e-6;       // step for the inner-product-term gradient
  unsigned seed = 0;           // stall-recovery jitter stream
};

struct OptimizerReport {
  int iterations = 0;
  double grad_norm = 0.0;
  double loss = 0.0;
  bool converged = false;
  std::vector<double> loss_trace;
};

/// Empirical quantile loss
///   (1/n) sum_i [ d(X_i, p) - beta <radial_field(xi, X_i), log_{X_i}(p)>_{X_i} ],
/// with the radial-field terms computed once per data point and cached.
/// Data-point terms are evaluated in parallel.
double quantile_loss(const Dataset& data, const SpdPoint& p, const QuantileIndex& q);

/// Serial reference of quantile_loss, kept for testing the parallel kernel.
double quantile_loss_serial(const Dataset& data, const SpdPoint& p, const QuantileIndex& q);

/// Older loss variant with the radial field taken at the candidate point:
///   (1/n) sum_i [ d(p, X_i) + beta <radial_field(xi, p), log_p(X_i)>_p ].
/// Provided for evaluation only; the optimizer minimizes quantile_loss.
double quantile_loss_at_candidate(const Dataset& data, const SpdPoint& p, const QuantileIndex& q);

/// Minimizer of quantile_loss by Riemannian descent with Armijo backtracking.
SpdPoint quantile(const Dataset& data, const QuantileIndex& q, const OptimizerSettings& cfg = {},
                  OptimizerReport* report = nullptr);

/// Like quantile, but records non-convergence in the report instead of
/// throwing and returns the final iterate either way. Grid evaluation uses
/// this so one stubborn cell cannot abort the others.
SpdPoint quantile_nothrow(const Dataset& data, const QuantileIndex& q,
                          const OptimizerSettings& cfg, OptimizerReport& report);

/// Non-throwing variant of frechet_median, same contract as quantile_nothrow.
SpdPoint frechet_median_nothrow(const Dataset& data, const OptimizerSettings& cfg,
                                OptimizerReport& report);

/// Quantile at beta = 0 (direction irrelevant): the Frechet median.
SpdPoint frechet_median(const Dataset& data, const OptimizerSettings& cfg = {},
                        OptimizerReport* report = nullptr);

/// Minimizer of the mean squared distance.
SpdPoint frechet_mean(const Dataset& data, const OptimizerSettings& cfg = {},
                      OptimizerReport* report = nullptr);

/// Cone element moving the control outcome onto the treated outcome along a
/// geodesic ray. beta = 0 is the zero effect; its direction is unspecified
/// and left empty.
struct TreatmentEffect {
  double beta = 0.0;
  std::optional<BoundaryDirection> xi;

  bool zero_effect() const { return !xi.has_value(); }
};

TreatmentEffect individual_treatment_effect(const TreatmentPair& pair);

}  // namespace spdgeo

#endif
