#ifndef SPDGEO_TYPES_HPP
#define SPDGEO_TYPES_HPP

#include <Eigen/Dense>

#include "spdgeo/errors.hpp"

namespace spdgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

bool all_finite(const Matrix& a);

/// Relative floor under which an eigenvalue of a PSD matrix counts as zero.
inline double psd_zero_tolerance(double largest_eigenvalue) {
  return 1e-12 * std::max(1.0, largest_eigenvalue);
}

/// Real symmetric matrix, symmetrized on construction. Immutable value type.
class SymmetricMatrix {
public:
  explicit SymmetricMatrix(Matrix a);

  static SymmetricMatrix zero(Index m) { return SymmetricMatrix(Matrix::Zero(m, m)); }
  static SymmetricMatrix identity(Index m) { return SymmetricMatrix(Matrix::Identity(m, m)); }

  Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

private:
  Matrix m_;
};

/// Symmetric positive-definite matrix: a point of the SPD manifold.
/// The checked constructor rejects matrices whose smallest eigenvalue is not
/// strictly above the dim-scaled PSD floor; this caps representable condition
/// numbers near 1e12, the limit at which double-precision spectral kernels
/// stay meaningful.
class SpdPoint {
public:
  explicit SpdPoint(Matrix a);
  explicit SpdPoint(const SymmetricMatrix& a) : SpdPoint(a.mat()) {}

  /// Trust path for matrices SPD by construction (e.g. V e^D V^T assembly).
  /// Symmetrizes but skips the eigenvalue check.
  static SpdPoint assume_spd(Matrix a);

  static SpdPoint identity(Index m) { return assume_spd(Matrix::Identity(m, m)); }

  Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

private:
  struct Trusted {};
  SpdPoint(Matrix a, Trusted);

  Matrix m_;
};

void require_same_dim(Index a, Index b, const char* where);

}  // namespace spdgeo

#endif
