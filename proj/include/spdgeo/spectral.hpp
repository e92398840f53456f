#ifndef SPDGEO_SPECTRAL_HPP
#define SPDGEO_SPECTRAL_HPP

#include "spdgeo/types.hpp"

namespace spdgeo {

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// descending; columns of `eigenvectors` are the matching eigenvectors.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Matrix with orthonormal columns (not necessarily square).
struct OrthonormalFrame {
  Matrix columns;
};

SpectralDecomposition eig_sym(const SymmetricMatrix& a);

/// Exp(A) = V diag(exp d_i) V^T; always SPD for symmetric A.
SpdPoint sym_exp(const SymmetricMatrix& a);

/// The unique real symmetric logarithm of an SPD matrix.
SymmetricMatrix sym_log(const SpdPoint& a);

/// V diag(d_i^e) V^T for PSD input. Negative exponents require strictly
/// positive eigenvalues. For e = 1/t this is the unique PSD t-th root.
SymmetricMatrix sym_power(const SymmetricMatrix& a, double exponent);

/// Modified Gram-Schmidt with one reorthogonalization pass and the
/// positive-diagonal convention <u_k, w_k> > 0. Accepts m' x k input with
/// linearly independent columns, m' >= k.
OrthonormalFrame gram_schmidt(const Matrix& w);

/// trace(A B) = sum of entrywise products for symmetric A, B.
double frobenius_inner(const SymmetricMatrix& a, const SymmetricMatrix& b);

}  // namespace spdgeo

#endif
