#include "spdgeo/radial.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "spdgeo/scaled_svd.hpp"

namespace spdgeo {

namespace {

constexpr double kDirectionNormSlack = 1e-6;
constexpr double kOracleTCap = 1e6;
constexpr double kBusemannT0 = 8.0;
constexpr double kBusemannTCap = 4096.0;
constexpr double kExpOverflowBound = 700.0;

void require_descending(const Vector& d, const char* where) {
  for (Index i = 0; i + 1 < d.size(); ++i) {
    if (d[i] < d[i + 1]) {
      throw InputError(std::string(where) + ": exponents must be sorted descending");
    }
  }
}

void require_full_column_rank(const Matrix& w, const char* where) {
  Eigen::JacobiSVD<Matrix> svd(w);
  const double smax = svd.singularValues().maxCoeff();
  const double smin = svd.singularValues().minCoeff();
  if (!(smin > 1e-12 * std::max(smax, 1e-300))) {
    std::ostringstream msg;
    msg << where << ": rank deficiency (singular values " << smax << " .. " << smin << ")";
    throw DegeneracyError(msg.str());
  }
}

// Spectrum of the direction at its base point plus the transport factor
// p^{1/2} V shared by every evaluation point.
struct DirectionSpectrum {
  Vector d;         // descending eigenvalues of p^{-1/2} z p^{-1/2}
  Matrix carrier;   // p^{1/2} V
};

DirectionSpectrum direction_spectrum(const BoundaryDirection& xi) {
  const SqrtPair pr = sqrt_pair(xi.base());
  SymmetricMatrix inner(pr.inv_half * xi.dir().mat() * pr.inv_half);
  SpectralDecomposition s = eig_sym(inner);
  return DirectionSpectrum{s.eigenvalues, pr.half * s.eigenvectors};
}

}  // namespace

BoundaryDirection::BoundaryDirection(SpdPoint base, SymmetricMatrix dir)
    : base_(std::move(base)), dir_(std::move(dir)) {
  require_same_dim(base_.dim(), dir_.dim(), "BoundaryDirection");
  const double norm = metric_norm(base_, dir_);
  if (std::abs(norm - 1.0) > kDirectionNormSlack) {
    std::ostringstream msg;
    msg << "BoundaryDirection: direction has metric norm " << norm
        << "; expected 1 within " << kDirectionNormSlack;
    throw InputError(msg.str());
  }
  dir_ = SymmetricMatrix(dir_.mat() / norm);
}

RadialFrame radial_frame(const BoundaryDirection& xi, const SpdPoint& x) {
  require_same_dim(xi.dim(), x.dim(), "radial_frame");
  const DirectionSpectrum spec = direction_spectrum(xi);
  const SqrtPair xr = sqrt_pair(x);
  Matrix w = xr.inv_half * spec.carrier;
  OrthonormalFrame u = gram_schmidt(w);
  return RadialFrame{std::move(w), std::move(u), spec.d};
}

SymmetricMatrix radial_field_with_basis(const SpdPoint& p, const Matrix& v, const Vector& d,
                                        const SpdPoint& x) {
  require_same_dim(p.dim(), x.dim(), "radial_field_with_basis");
  if (v.rows() != p.dim() || v.cols() != p.dim() || d.size() != p.dim()) {
    throw InputError("radial_field_with_basis: eigendecomposition has wrong dimensions");
  }
  const SqrtPair pr = sqrt_pair(p);
  const SqrtPair xr = sqrt_pair(x);
  Matrix w = xr.inv_half * pr.half * v;
  OrthonormalFrame u = gram_schmidt(w);
  Matrix core = u.columns * d.asDiagonal() * u.columns.transpose();
  return SymmetricMatrix(xr.half * core * xr.half);
}

SymmetricMatrix radial_field(const BoundaryDirection& xi, const SpdPoint& x) {
  require_same_dim(xi.dim(), x.dim(), "radial_field");
  const DirectionSpectrum spec = direction_spectrum(xi);
  const SqrtPair xr = sqrt_pair(x);
  Matrix w = xr.inv_half * spec.carrier;
  OrthonormalFrame u = gram_schmidt(w);
  Matrix core = u.columns * spec.d.asDiagonal() * u.columns.transpose();
  return SymmetricMatrix(xr.half * core * xr.half);
}

SymmetricMatrix radial_field_oracle(const BoundaryDirection& xi, const SpdPoint& x, double t) {
  require_same_dim(xi.dim(), x.dim(), "radial_field_oracle");
  if (!(t > 0.0)) {
    throw InputError("radial_field_oracle: t must be positive");
  }
  if (t > kOracleTCap) {
    std::ostringstream msg;
    msg << "radial_field_oracle: t = " << t << " exceeds the supported range " << kOracleTCap
        << "; evaluate in the log domain with a dedicated kernel";
    throw RangeError(msg.str());
  }
  // The ray point g(t) never gets materialized: x^{-1/2} g(t) x^{-1/2}
  // = W e^{tD} W^T with W = x^{-1/2} p^{1/2} V, so its log-eigenvalues come
  // from the scaled-column SVD of W e^{tD/2}.
  const DirectionSpectrum spec = direction_spectrum(xi);
  const SqrtPair xr = sqrt_pair(x);
  Matrix w = xr.inv_half * spec.carrier;
  ScaledSvd svd = scaled_svd(w, 0.5 * t * spec.d);
  Vector log_eigs = 2.0 * svd.log_sigma;
  const double dist = log_eigs.norm();
  if (!(dist > 0.0)) {
    throw InputError("radial_field_oracle: evaluation point coincides with the ray point");
  }
  Matrix core = svd.left * log_eigs.asDiagonal() * svd.left.transpose();
  return SymmetricMatrix(xr.half * core * xr.half / dist);
}

PowerMean power_mean_finite(const Vector& d, const Matrix& w, double t) {
  if (!(t > 0.0)) {
    throw InputError("power_mean_finite: t must be positive");
  }
  if (w.rows() != w.cols() || w.rows() != d.size()) {
    throw InputError("power_mean_finite: need square W matching d");
  }
  require_descending(d, "power_mean_finite");
  require_full_column_rank(w, "power_mean_finite");
  ScaledSvd svd = scaled_svd(w, 0.5 * t * d);
  Vector roots = (2.0 * svd.log_sigma / t).array().exp();
  Matrix h = svd.left * roots.asDiagonal() * svd.left.transpose();
  return PowerMean{t, SymmetricMatrix(std::move(h))};
}

SymmetricMatrix power_mean_limit(const Vector& d, const Matrix& w) {
  if (w.rows() != w.cols() || w.rows() != d.size()) {
    throw InputError("power_mean_limit: need square W matching d");
  }
  return power_mean_limit_degenerate(d, w);
}

SymmetricMatrix power_mean_limit_degenerate(const Vector& d, const Matrix& w) {
  if (w.cols() != d.size() || w.rows() < w.cols()) {
    throw InputError("power_mean_limit_degenerate: need m' x m W with m' >= m matching d");
  }
  require_descending(d, "power_mean_limit_degenerate");
  if (d.maxCoeff() > kExpOverflowBound) {
    throw RangeError("power_mean_limit_degenerate: exp(d) overflows double precision");
  }
  OrthonormalFrame u = gram_schmidt(w);
  // Extending the frame by an orthonormal basis of the complement only adds
  // zero eigenvalues, so the assembled limit needs the frame columns alone.
  Vector e = d.array().exp();
  Matrix h = u.columns * e.asDiagonal() * u.columns.transpose();
  return SymmetricMatrix(std::move(h));
}

double busemann(const BoundaryDirection& xi, const SpdPoint& x, double tol) {
  require_same_dim(xi.dim(), x.dim(), "busemann");
  if (!(tol > 0.0)) {
    throw InputError("busemann: tol must be positive");
  }
  const DirectionSpectrum spec = direction_spectrum(xi);
  const SqrtPair xr = sqrt_pair(x);
  Matrix w = xr.inv_half * spec.carrier;

  // Raw estimates d(x, g(t)) - t converge like C/t (the flat directions of
  // the manifold behave Euclidean), far too slowly for tight tolerances
  // inside the t cap, so the doubling ladder is Richardson extrapolated
  // through 1/t and 1/t^2 and the stopping test runs on the extrapolants.
  double prev_raw = 0.0, prev_r1 = 0.0;
  double last_r2 = 0.0, second_last_r2 = 0.0;
  bool have_r2 = false, have_two_r2 = false;
  int stage = 0;
  for (double t = kBusemannT0; t <= kBusemannTCap; t *= 2.0, ++stage) {
    ScaledSvd svd = scaled_svd(w, 0.5 * t * spec.d);
    const double raw = (2.0 * svd.log_sigma).norm() - t;
    if (stage >= 1) {
      const double r1 = 2.0 * raw - prev_raw;
      if (stage >= 2) {
        const double r2 = (4.0 * r1 - prev_r1) / 3.0;
        if (have_r2 && std::abs(r2 - last_r2) < 0.5 * tol) {
          return r2;
        }
        second_last_r2 = last_r2;
        have_two_r2 = have_r2;
        last_r2 = r2;
        have_r2 = true;
      }
      prev_r1 = r1;
    }
    prev_raw = raw;
  }
  std::ostringstream msg;
  msg << "busemann: no convergence within the ray cap " << kBusemannTCap
      << "; last two estimates " << (have_two_r2 ? second_last_r2 : prev_r1) << " and "
      << last_r2;
  throw ConvergenceError(msg.str());
}

RadialJacobianFd::RadialJacobianFd(SpdPoint x, std::vector<SymmetricMatrix> basis,
                                   std::vector<SymmetricMatrix> columns)
    : x_(std::move(x)), basis_(std::move(basis)), columns_(std::move(columns)) {}

SymmetricMatrix RadialJacobianFd::apply(const SymmetricMatrix& direction) const {
  require_same_dim(x_.dim(), direction.dim(), "RadialJacobianFd::apply");
  Matrix out = Matrix::Zero(x_.dim(), x_.dim());
  for (size_t k = 0; k < basis_.size(); ++k) {
    const double c = metric_inner(x_, direction, basis_[k]);
    out += c * columns_[k].mat();
  }
  return SymmetricMatrix(std::move(out));
}

RadialJacobianFd radial_jacobian_fd(const BoundaryDirection& xi, const SpdPoint& x, double h) {
  require_same_dim(xi.dim(), x.dim(), "radial_jacobian_fd");
  if (!(h > 0.0)) {
    throw InputError("radial_jacobian_fd: h must be positive");
  }
  std::vector<SymmetricMatrix> basis = tangent_basis(x);
  std::vector<SymmetricMatrix> columns;
  columns.reserve(basis.size());
  for (const SymmetricMatrix& e : basis) {
    SpdPoint forward(x.mat() + h * e.mat());
    SpdPoint backward(x.mat() - h * e.mat());
    SymmetricMatrix fp = radial_field(xi, forward);
    SymmetricMatrix fm = radial_field(xi, backward);
    Matrix diff = (fp.mat() - fm.mat()) / (2.0 * h);
    if (!diff.allFinite()) {
      std::ostringstream msg;
      msg << "radial_jacobian_fd: non-finite difference at step " << h
          << "; the step is too small for the local scale";
      throw RangeError(msg.str());
    }
    columns.emplace_back(std::move(diff));
  }
  return RadialJacobianFd(x, std::move(basis), std::move(columns));
}

}  // namespace spdgeo
