#include "spdgeo/geometry.hpp"

#include <cmath>
#include <sstream>

namespace spdgeo {

namespace {

constexpr double kExpOverflowBound = 700.0;

}  // namespace

SqrtPair sqrt_pair(const SpdPoint& x) {
  SpectralDecomposition s = eig_sym(SymmetricMatrix(x.mat()));
  const double floor = psd_zero_tolerance(s.eigenvalues.maxCoeff());
  if (!(s.eigenvalues.minCoeff() > floor)) {
    std::ostringstream msg;
    msg << "sqrt_pair: smallest eigenvalue " << s.eigenvalues.minCoeff()
        << " is not positive beyond tolerance " << floor;
    throw DomainError(msg.str());
  }
  SqrtPair out;
  Vector root = s.eigenvalues.array().sqrt();
  out.half = s.eigenvectors * root.asDiagonal() * s.eigenvectors.transpose();
  out.inv_half = s.eigenvectors * root.cwiseInverse().asDiagonal() * s.eigenvectors.transpose();
  return out;
}

double metric_inner(const SpdPoint& x, const SymmetricMatrix& v1, const SymmetricMatrix& v2) {
  require_same_dim(x.dim(), v1.dim(), "metric_inner");
  require_same_dim(x.dim(), v2.dim(), "metric_inner");
  const SqrtPair r = sqrt_pair(x);
  Matrix a = r.inv_half * v1.mat() * r.inv_half;
  Matrix b = r.inv_half * v2.mat() * r.inv_half;
  return a.cwiseProduct(b).sum();
}

double metric_norm(const SpdPoint& x, const SymmetricMatrix& v) {
  return std::sqrt(std::max(0.0, metric_inner(x, v, v)));
}

SpdPoint exp_map(const SpdPoint& x, const SymmetricMatrix& v) {
  require_same_dim(x.dim(), v.dim(), "exp_map");
  const SqrtPair r = sqrt_pair(x);
  SymmetricMatrix inner(r.inv_half * v.mat() * r.inv_half);
  SpectralDecomposition s = eig_sym(inner);
  if (s.eigenvalues.cwiseAbs().maxCoeff() > kExpOverflowBound) {
    std::ostringstream msg;
    msg << "exp_map: scaled eigenvalue " << s.eigenvalues.cwiseAbs().maxCoeff()
        << " exceeds the double-precision exponential range; evaluate in the log domain instead";
    throw RangeError(msg.str());
  }
  Matrix e = s.eigenvectors * s.eigenvalues.array().exp().matrix().asDiagonal() *
             s.eigenvectors.transpose();
  return SpdPoint::assume_spd(r.half * e * r.half);
}

SymmetricMatrix log_map(const SpdPoint& x, const SpdPoint& p) {
  require_same_dim(x.dim(), p.dim(), "log_map");
  const SqrtPair r = sqrt_pair(x);
  SymmetricMatrix inner(r.inv_half * p.mat() * r.inv_half);
  SpectralDecomposition s = eig_sym(inner);
  const double floor = psd_zero_tolerance(s.eigenvalues.maxCoeff());
  if (!(s.eigenvalues.minCoeff() > floor)) {
    std::ostringstream msg;
    msg << "log_map: target is not positive definite relative to the base point (eigenvalue "
        << s.eigenvalues.minCoeff() << ")";
    throw DomainError(msg.str());
  }
  Matrix l = s.eigenvectors * s.eigenvalues.array().log().matrix().asDiagonal() *
             s.eigenvectors.transpose();
  return SymmetricMatrix(r.half * l * r.half);
}

double distance(const SpdPoint& x, const SpdPoint& p) {
  require_same_dim(x.dim(), p.dim(), "distance");
  const SqrtPair r = sqrt_pair(x);
  SymmetricMatrix inner(r.inv_half * p.mat() * r.inv_half);
  SpectralDecomposition s = eig_sym(inner);
  const double floor = psd_zero_tolerance(s.eigenvalues.maxCoeff());
  if (!(s.eigenvalues.minCoeff() > floor)) {
    std::ostringstream msg;
    msg << "distance: inputs are not positive definite relative to each other (eigenvalue "
        << s.eigenvalues.minCoeff() << ")";
    throw DomainError(msg.str());
  }
  return s.eigenvalues.array().log().matrix().norm();
}

SpdPoint geodesic(const SpdPoint& x, const SymmetricMatrix& v, double t) {
  return exp_map(x, SymmetricMatrix(t * v.mat()));
}

std::vector<SymmetricMatrix> tangent_basis(const SpdPoint& x) {
  const Index m = x.dim();
  const SqrtPair r = sqrt_pair(x);
  std::vector<SymmetricMatrix> basis;
  basis.reserve(static_cast<size_t>(m * (m + 1) / 2));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < m; ++i) {
    Matrix s = Matrix::Zero(m, m);
    s(i, i) = 1.0;
    basis.emplace_back(Matrix(r.half * s * r.half));
  }
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      Matrix s = Matrix::Zero(m, m);
      s(i, j) = s(j, i) = inv_sqrt2;
      basis.emplace_back(Matrix(r.half * s * r.half));
    }
  }
  return basis;
}

}  // namespace spdgeo
