#ifndef SPDGEO_RADIAL_HPP
#define SPDGEO_RADIAL_HPP

#include <vector>

#include "spdgeo/geometry.hpp"

namespace spdgeo {

/// A point of the boundary at infinity, represented by the base point p and
/// the unit initial velocity z of the ray through p in that asymptote class.
/// The direction is renormalized if its metric norm deviates from 1 by at
/// most 1e-6 and rejected beyond that.
class BoundaryDirection {
public:
  BoundaryDirection(SpdPoint base, SymmetricMatrix dir);

  const SpdPoint& base() const { return base_; }
  const SymmetricMatrix& dir() const { return dir_; }
  Index dim() const { return base_.dim(); }

private:
  SpdPoint base_;
  SymmetricMatrix dir_;
};

/// Intermediate data of the radial-field construction at x: the transported
/// eigenbasis columns W = x^{-1/2} p^{1/2} V, their orthonormalization U, and
/// the descending direction spectrum D.
struct RadialFrame {
  Matrix transported;       // W
  OrthonormalFrame frame;   // U = gram_schmidt(W)
  Vector eigenvalues;       // D, descending
};

RadialFrame radial_frame(const BoundaryDirection& xi, const SpdPoint& x);

/// Closed-form radial field:
///   xi_x = x^{1/2} U diag(D) U^T x^{1/2},
/// where V D V^T is a descending eigendecomposition of p^{-1/2} z p^{-1/2},
/// W = x^{-1/2} p^{1/2} V and U = gram_schmidt(W). Unit metric norm at x.
SymmetricMatrix radial_field(const BoundaryDirection& xi, const SpdPoint& x);

/// Same construction from an explicitly supplied eigendecomposition (V, D) of
/// p^{-1/2} z p^{-1/2}. Lets callers probe invariance under different valid
/// eigenvector choices at repeated eigenvalues.
SymmetricMatrix radial_field_with_basis(const SpdPoint& p, const Matrix& v, const Vector& d,
                                        const SpdPoint& x);

/// Finite-t limit-definition evaluation: log_map(x, g(t)) / distance(x, g(t))
/// with g(t) the ray from the base point. Evaluated in the eigenbasis of the
/// direction so that no e^{t d} is ever materialized; t far beyond the naive
/// overflow threshold is usable.
SymmetricMatrix radial_field_oracle(const BoundaryDirection& xi, const SpdPoint& x, double t);

/// H(t) = [sum_i e^{t d_i} w_i w_i^T]^{1/t} for descending d and full-rank W.
struct PowerMean {
  double t;
  SymmetricMatrix value;
};

PowerMean power_mean_finite(const Vector& d, const Matrix& w, double t);

/// t -> infinity limit of H(t): U diag(e^{d_i}) U^T with U = gram_schmidt(W).
SymmetricMatrix power_mean_limit(const Vector& d, const Matrix& w);

/// Limit for m linearly independent columns in dimension m' >= m: the root
/// keeps rank m, with zero eigenvalues on the orthogonal complement.
SymmetricMatrix power_mean_limit_degenerate(const Vector& d, const Matrix& w);

/// Busemann function estimate: lim_{t->inf} distance(x, g(t)) - t, normalized
/// to 0 at the base point. The ray parameter doubles from 8 to 4096; raw
/// estimates converge like C/t, so successive estimates are Richardson
/// extrapolated through 1/t and 1/t^2 before the < tol/2 stopping test.
double busemann(const BoundaryDirection& xi, const SpdPoint& x, double tol);

/// Central finite-difference Jacobian of x -> radial_field(xi, x) along the
/// metric-orthonormal tangent basis at x.
class RadialJacobianFd {
public:
  RadialJacobianFd(SpdPoint x, std::vector<SymmetricMatrix> basis, std::vector<SymmetricMatrix> columns);

  /// Directional derivative along an arbitrary symmetric direction, expanded
  /// in the stored basis.
  SymmetricMatrix apply(const SymmetricMatrix& direction) const;

  const std::vector<SymmetricMatrix>& columns() const { return columns_; }
  const std::vector<SymmetricMatrix>& basis() const { return basis_; }

private:
  SpdPoint x_;
  std::vector<SymmetricMatrix> basis_;
  std::vector<SymmetricMatrix> columns_;
};

RadialJacobianFd radial_jacobian_fd(const BoundaryDirection& xi, const SpdPoint& x, double h);

}  // namespace spdgeo

#endif
