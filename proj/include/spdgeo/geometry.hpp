#ifndef SPDGEO_GEOMETRY_HPP
#define SPDGEO_GEOMETRY_HPP

#include <vector>

#include "spdgeo/spectral.hpp"
#include "spdgeo/types.hpp"

namespace spdgeo {

/// Tangent vector attached to its base point.
struct TangentVector {
  SpdPoint base;
  SymmetricMatrix vec;
};

/// x^{1/2} and x^{-1/2} computed from one eigendecomposition, so the maps
/// below stay mutually consistent.
struct SqrtPair {
  Matrix half;
  Matrix inv_half;
};

SqrtPair sqrt_pair(const SpdPoint& x);

/// <v1, v2>_x = trace(x^{-1} v1 x^{-1} v2).
double metric_inner(const SpdPoint& x, const SymmetricMatrix& v1, const SymmetricMatrix& v2);

double metric_norm(const SpdPoint& x, const SymmetricMatrix& v);

/// x^{1/2} Exp(x^{-1/2} v x^{-1/2}) x^{1/2}.
SpdPoint exp_map(const SpdPoint& x, const SymmetricMatrix& v);

/// x^{1/2} Log(x^{-1/2} p x^{-1/2}) x^{1/2}; inverse of exp_map at x.
SymmetricMatrix log_map(const SpdPoint& x, const SpdPoint& p);

/// || Log(x^{-1/2} p x^{-1/2}) ||_F.
double distance(const SpdPoint& x, const SpdPoint& p);

/// exp_map(x, t v).
SpdPoint geodesic(const SpdPoint& x, const SymmetricMatrix& v, double t);

/// Orthonormal basis of the tangent space at x in the metric at x:
/// E_k = x^{1/2} S_k x^{1/2} with S_k the standard Frobenius-orthonormal
/// basis of symmetric matrices. Size m(m+1)/2.
std::vector<SymmetricMatrix> tangent_basis(const SpdPoint& x);

}  // namespace spdgeo

#endif
