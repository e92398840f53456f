#include "spdgeo/types.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace spdgeo {

bool all_finite(const Matrix& a) { return a.allFinite(); }

namespace {

Matrix symmetrized(Matrix a, const char* where) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    std::ostringstream msg;
    msg << where << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw InputError(msg.str());
  }
  if (!a.allFinite()) {
    throw InputError(std::string(where) + ": non-finite entries");
  }
  Matrix s = 0.5 * (a + a.transpose());
  return s;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix a) : m_(symmetrized(std::move(a), "SymmetricMatrix")) {}

SpdPoint::SpdPoint(Matrix a, Trusted) : m_(symmetrized(std::move(a), "SpdPoint")) {}

SpdPoint SpdPoint::assume_spd(Matrix a) { return SpdPoint(std::move(a), Trusted{}); }

SpdPoint::SpdPoint(Matrix a) : SpdPoint(std::move(a), Trusted{}) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  const double largest = es.eigenvalues().maxCoeff();
  const double smallest = es.eigenvalues().minCoeff();
  const double tol = static_cast<double>(dim()) * psd_zero_tolerance(largest);
  if (!(smallest > tol)) {
    std::ostringstream msg;
    msg << "SpdPoint: not positive definite, smallest eigenvalue " << smallest
        << " is not above tolerance " << tol;
    throw DomainError(msg.str());
  }
}

void require_same_dim(Index a, Index b, const char* where) {
  if (a != b) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (" << a << " vs " << b << ")";
    throw InputError(msg.str());
  }
}

}  // namespace spdgeo
