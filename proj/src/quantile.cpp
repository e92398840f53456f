#include "spdgeo/quantile.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "spdgeo/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spdgeo {

QuantileIndex::QuantileIndex(double beta_in, BoundaryDirection xi_in)
    : beta(beta_in), xi(std::move(xi_in)) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    std::ostringstream msg;
    msg << "QuantileIndex: beta = " << beta << " is outside [0, 1)";
    throw InputError(msg.str());
  }
}

Dataset::Dataset(std::vector<SpdPoint> points, std::vector<std::string> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.empty()) {
    throw InputError("Dataset: no points");
  }
  const Index m = points_.front().dim();
  for (size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].dim() != m) {
      std::ostringstream msg;
      msg << "Dataset: point " << i << " has dimension " << points_[i].dim() << ", expected " << m;
      throw InputError(msg.str());
    }
  }
  if (labels_.empty()) {
    labels_.reserve(points_.size());
    for (size_t i = 0; i < points_.size(); ++i) {
      labels_.push_back(std::to_string(i));
    }
  } else if (labels_.size() != points_.size()) {
    throw InputError("Dataset: label count does not match point count");
  }
}

TreatmentPair::TreatmentPair(SpdPoint control_in, SpdPoint treated_in)
    : control(std::move(control_in)), treated(std::move(treated_in)) {
  require_same_dim(control.dim(), treated.dim(), "TreatmentPair");
}

namespace {

constexpr double kWeiszfeldGuard = 1e-9;  // drop distance gradients this close to a data point
constexpr double kStepFloor = 1e-16;
constexpr int kMaxStalls = 5;

// Per-data-point state reused across every loss and gradient evaluation:
// the cached radial fields xi_i = radial_field(xi, X_i) and the matrices
// A_i = X_i^{-1} xi_i X_i^{-1} that turn the metric inner product into a
// Frobenius pairing with log_{X_i}(p).
struct LossContext {
  const Dataset* data = nullptr;
  double beta = 0.0;
  std::vector<Matrix> a_terms;

  double term(Index i, const SpdPoint& p) const {
    const SpdPoint& xi_pt = data->point(i);
    double value = distance(xi_pt, p);
    if (beta > 0.0) {
      SymmetricMatrix lg = log_map(xi_pt, p);
      value -= beta * a_terms[static_cast<size_t>(i)].cwiseProduct(lg.mat()).sum();
    }
    return value;
  }
};

LossContext make_loss_context(const Dataset& data, double beta, const BoundaryDirection* xi) {
  LossContext ctx;
  ctx.data = &data;
  ctx.beta = beta;
  if (beta > 0.0) {
    std::vector<SymmetricMatrix> fields =
        batch::radial_fields(*xi, std::span<const SpdPoint>(data.points()));
    ctx.a_terms.reserve(fields.size());
    for (Index i = 0; i < data.size(); ++i) {
      const SqrtPair r = sqrt_pair(data.point(i));
      Matrix inv = r.inv_half * r.inv_half;
      ctx.a_terms.emplace_back(inv * fields[static_cast<size_t>(i)].mat() * inv);
    }
  }
  return ctx;
}

double loss_parallel(const LossContext& ctx, const SpdPoint& p) {
  const Index n = ctx.data->size();
  double sum = 0.0;
  std::exception_ptr error;
#pragma omp parallel for schedule(static) reduction(+ : sum)
  for (Index i = 0; i < n; ++i) {
    try {
      sum += ctx.term(i, p);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return sum / static_cast<double>(n);
}

// Metric gradient of the loss at p: analytic for the distance part,
// central finite differences along the metric-orthonormal tangent basis for
// the inner-product part.
SymmetricMatrix loss_gradient(const LossContext& ctx, const SpdPoint& p, double fd_step) {
  const Index n = ctx.data->size();
  const Index m = p.dim();
  Matrix grad = Matrix::Zero(m, m);
  for (Index i = 0; i < n; ++i) {
    const SpdPoint& xi_pt = ctx.data->point(i);
    const double d = distance(p, xi_pt);
    if (d < kWeiszfeldGuard) continue;
    grad -= log_map(p, xi_pt).mat() / d;
  }
  grad /= static_cast<double>(n);

  if (ctx.beta > 0.0) {
    const std::vector<SymmetricMatrix> basis = tangent_basis(p);
    const auto inner_sum = [&](const SpdPoint& q) {
      double s = 0.0;
      std::exception_ptr error;
#pragma omp parallel for schedule(static) reduction(+ : s)
      for (Index i = 0; i < n; ++i) {
        try {
          SymmetricMatrix lg = log_map(ctx.data->point(i), q);
          s += ctx.a_terms[static_cast<size_t>(i)].cwiseProduct(lg.mat()).sum();
        } catch (...) {
#pragma omp critical
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
      return ctx.beta * s / static_cast<double>(n);
    };
    for (const SymmetricMatrix& e : basis) {
      const double fwd = inner_sum(exp_map(p, SymmetricMatrix(fd_step * e.mat())));
      const double bwd = inner_sum(exp_map(p, SymmetricMatrix(-fd_step * e.mat())));
      const double c = (fwd - bwd) / (2.0 * fd_step);
      grad -= c * e.mat();
    }
  }
  return SymmetricMatrix(std::move(grad));
}

struct DescentProblem {
  std::function<double(const SpdPoint&)> loss;
  std::function<SymmetricMatrix(const SpdPoint&)> gradient;
};

SpdPoint descend(const DescentProblem& problem, SpdPoint p, const OptimizerSettings& cfg,
                 OptimizerReport& report, bool* converged_out) {
  std::mt19937_64 jitter_rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double loss = problem.loss(p);
  report.loss_trace.clear();
  report.loss_trace.push_back(loss);
  int stalls = 0;
  bool converged = false;

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    SymmetricMatrix grad = problem.gradient(p);
    const double gnorm = metric_norm(p, grad);
    report.grad_norm = gnorm;
    if (gnorm <= cfg.tolerance) {
      converged = true;
      break;
    }

    const double noise_floor = 1e-15 * (1.0 + std::abs(loss));
    double step = cfg.initial_step;
    bool accepted = false;
    while (step >= kStepFloor) {
      SpdPoint candidate = exp_map(p, SymmetricMatrix(-step * grad.mat()));
      const double candidate_loss = problem.loss(candidate);
      if (candidate_loss <= loss - cfg.armijo * step * gnorm * gnorm + noise_floor) {
        p = std::move(candidate);
        loss = candidate_loss;
        accepted = true;
        break;
      }
      step *= cfg.shrink;
    }
    if (!accepted) {
      // Backtracking stalled, typically at a kink of the distance terms.
      // Nudge off the kink with a tiny seeded tangent perturbation.
      if (++stalls > kMaxStalls) break;
      const Index m = p.dim();
      Matrix noise(m, m);
      for (Index r = 0; r < m; ++r)
        for (Index c = 0; c < m; ++c) noise(r, c) = gauss(jitter_rng);
      SymmetricMatrix dir{noise};
      const double dn = metric_norm(p, dir);
      if (dn > 0.0) {
        p = exp_map(p, SymmetricMatrix((10.0 * cfg.tolerance / dn) * dir.mat()));
        loss = problem.loss(p);
      }
    }
    report.loss_trace.push_back(loss);
  }

  report.iterations = iter;
  report.loss = loss;
  report.converged = converged;
  if (converged_out) *converged_out = converged;
  return p;
}

std::string trace_tail(const std::vector<double>& trace) {
  std::ostringstream msg;
  const size_t k = std::min<size_t>(trace.size(), 6);
  msg << "last losses:";
  for (size_t i = trace.size() - k; i < trace.size(); ++i) {
    msg << " " << trace[i];
  }
  return msg.str();
}

SpdPoint minimize_loss(const Dataset& data, const LossContext& ctx, const OptimizerSettings& cfg,
                       OptimizerReport& report, bool nothrow, bool* converged_out) {
  DescentProblem problem;
  problem.loss = [&](const SpdPoint& p) { return loss_parallel(ctx, p); };
  problem.gradient = [&](const SpdPoint& p) { return loss_gradient(ctx, p, cfg.fd_step); };

  // Deterministic initialization: the data point with the smallest loss.
  Index best = 0;
  double best_loss = loss_parallel(ctx, data.point(0));
  for (Index i = 1; i < data.size(); ++i) {
    const double l = loss_parallel(ctx, data.point(i));
    if (l < best_loss) {
      best_loss = l;
      best = i;
    }
  }

  bool converged = false;
  SpdPoint out = descend(problem, data.point(best), cfg, report, &converged);
  if (!converged && !nothrow) {
    std::ostringstream msg;
    msg << "quantile optimizer: gradient norm " << report.grad_norm << " above tolerance "
        << cfg.tolerance << " after " << report.iterations << " iterations; "
        << trace_tail(report.loss_trace);
    throw ConvergenceError(msg.str());
  }
  if (converged_out) *converged_out = converged;
  return out;
}

}  // namespace

double quantile_loss(const Dataset& data, const SpdPoint& p, const QuantileIndex& q) {
  require_same_dim(data.dim(), p.dim(), "quantile_loss");
  LossContext ctx = make_loss_context(data, q.beta, &q.xi);
  return loss_parallel(ctx, p);
}

double quantile_loss_serial(const Dataset& data, const SpdPoint& p, const QuantileIndex& q) {
  require_same_dim(data.dim(), p.dim(), "quantile_loss_serial");
  LossContext ctx = make_loss_context(data, q.beta, &q.xi);
  double sum = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    sum += ctx.term(i, p);
  }
  return sum / static_cast<double>(data.size());
}

double quantile_loss_at_candidate(const Dataset& data, const SpdPoint& p, const QuantileIndex& q) {
  require_same_dim(data.dim(), p.dim(), "quantile_loss_at_candidate");
  const SymmetricMatrix field = radial_field(q.xi, p);
  double sum = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const SpdPoint& xi_pt = data.point(i);
    sum += distance(p, xi_pt) + q.beta * metric_inner(p, field, log_map(p, xi_pt));
  }
  return sum / static_cast<double>(data.size());
}

SpdPoint quantile(const Dataset& data, const QuantileIndex& q, const OptimizerSettings& cfg,
                  OptimizerReport* report) {
  require_same_dim(data.dim(), q.xi.dim(), "quantile");
  LossContext ctx = make_loss_context(data, q.beta, &q.xi);
  OptimizerReport local;
  OptimizerReport& rep = report ? *report : local;
  return minimize_loss(data, ctx, cfg, rep, false, nullptr);
}

SpdPoint quantile_nothrow(const Dataset& data, const QuantileIndex& q,
                          const OptimizerSettings& cfg, OptimizerReport& report) {
  require_same_dim(data.dim(), q.xi.dim(), "quantile_nothrow");
  LossContext ctx = make_loss_context(data, q.beta, &q.xi);
  return minimize_loss(data, ctx, cfg, report, true, nullptr);
}

SpdPoint frechet_median_nothrow(const Dataset& data, const OptimizerSettings& cfg,
                                OptimizerReport& report) {
  LossContext ctx = make_loss_context(data, 0.0, nullptr);
  return minimize_loss(data, ctx, cfg, report, true, nullptr);
}

SpdPoint frechet_median(const Dataset& data, const OptimizerSettings& cfg,
                        OptimizerReport* report) {
  LossContext ctx = make_loss_context(data, 0.0, nullptr);
  OptimizerReport local;
  OptimizerReport& rep = report ? *report : local;
  return minimize_loss(data, ctx, cfg, rep, false, nullptr);
}

SpdPoint frechet_mean(const Dataset& data, const OptimizerSettings& cfg, OptimizerReport* report) {
  const Index n = data.size();
  DescentProblem problem;
  problem.loss = [&](const SpdPoint& p) {
    double sum = 0.0;
    std::exception_ptr error;
#pragma omp parallel for schedule(static) reduction(+ : sum)
    for (Index i = 0; i < n; ++i) {
      try {
        const double d = distance(data.point(i), p);
        sum += d * d;
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return sum / static_cast<double>(n);
  };
  problem.gradient = [&](const SpdPoint& p) {
    Matrix grad = Matrix::Zero(p.dim(), p.dim());
    for (Index i = 0; i < n; ++i) {
      grad -= 2.0 * log_map(p, data.point(i)).mat();
    }
    return SymmetricMatrix(grad / static_cast<double>(n));
  };

  Index best = 0;
  double best_loss = problem.loss(data.point(0));
  for (Index i = 1; i < n; ++i) {
    const double l = problem.loss(data.point(i));
    if (l < best_loss) {
      best_loss = l;
      best = i;
    }
  }

  OptimizerReport local;
  OptimizerReport& rep = report ? *report : local;
  bool converged = false;
  SpdPoint out = descend(problem, data.point(best), cfg, rep, &converged);
  if (!converged) {
    std::ostringstream msg;
    msg << "frechet_mean: gradient norm " << rep.grad_norm << " above tolerance " << cfg.tolerance
        << " after " << rep.iterations << " iterations; " << trace_tail(rep.loss_trace);
    throw ConvergenceError(msg.str());
  }
  return out;
}

TreatmentEffect individual_treatment_effect(const TreatmentPair& pair) {
  TreatmentEffect effect;
  effect.beta = distance(pair.control, pair.treated);
  if (effect.beta > 1e-12) {
    SymmetricMatrix dir = log_map(pair.control, pair.treated);
    effect.xi = BoundaryDirection(pair.control, SymmetricMatrix(dir.mat() / effect.beta));
  } else {
    effect.beta = 0.0;
  }
  return effect;
}

}  // namespace spdgeo
