#ifndef SPDGEO_SCALED_SVD_HPP
#define SPDGEO_SCALED_SVD_HPP

#include "spdgeo/types.hpp"

namespace spdgeo {

/// SVD of W * diag(exp(s_1), ..., exp(s_k)) where the scale exponents s_j may
/// be far beyond double range (|s| up to ~1e6). Singular values are returned
/// as logarithms. `left` holds the left singular vectors, orthonormal, ordered
/// by descending log_sigma.
///
/// This is a one-sided Jacobi SVD run on columns kept in (unit vector,
/// log-magnitude) form, so strongly graded products such as
/// W diag(e^{t d_1/2}, ..., e^{t d_k/2}) keep full relative accuracy in their
/// small singular values, which a dense eigensolver on the assembled Gram
/// matrix cannot do once e^{t(d_k - d_1)} drops below machine epsilon.
struct ScaledSvd {
  Matrix left;       // m' x k, orthonormal columns
  Vector log_sigma;  // length k, descending
};

ScaledSvd scaled_svd(const Matrix& w, const Vector& log_scales);

}  // namespace spdgeo

#endif
