#include "spdgeo/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace spdgeo {

SpectralDecomposition eig_sym(const SymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  if (es.info() != Eigen::Success) {
    throw InputError("eig_sym: eigendecomposition failed");
  }
  // Eigen sorts ascending; flip to descending.
  const Index m = a.dim();
  SpectralDecomposition out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  (void)m;
  return out;
}

namespace {

constexpr double kExpOverflowBound = 700.0;  // exp(709.78) is the double limit

Matrix assemble(const SpectralDecomposition& s, const Vector& mapped) {
  return s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.transpose();
}

}  // namespace

SpdPoint sym_exp(const SymmetricMatrix& a) {
  SpectralDecomposition s = eig_sym(a);
  if (s.eigenvalues.maxCoeff() > kExpOverflowBound) {
    std::ostringstream msg;
    msg << "sym_exp: eigenvalue " << s.eigenvalues.maxCoeff()
        << " would overflow exp; evaluate in the log domain instead";
    throw RangeError(msg.str());
  }
  return SpdPoint::assume_spd(assemble(s, s.eigenvalues.array().exp()));
}

SymmetricMatrix sym_log(const SpdPoint& a) {
  SpectralDecomposition s = eig_sym(SymmetricMatrix(a.mat()));
  const double floor = psd_zero_tolerance(s.eigenvalues.maxCoeff());
  for (Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues[i] <= floor) {
      std::ostringstream msg;
      msg << "sym_log: eigenvalue " << s.eigenvalues[i] << " at position " << i
          << " is not positive beyond tolerance " << floor;
      throw DomainError(msg.str());
    }
  }
  return SymmetricMatrix(assemble(s, s.eigenvalues.array().log()));
}

SymmetricMatrix sym_power(const SymmetricMatrix& a, double exponent) {
  SpectralDecomposition s = eig_sym(a);
  const double largest = s.eigenvalues.maxCoeff();
  const double floor = psd_zero_tolerance(largest);
  Vector mapped(s.eigenvalues.size());
  for (Index i = 0; i < s.eigenvalues.size(); ++i) {
    double lambda = s.eigenvalues[i];
    if (lambda < -floor) {
      std::ostringstream msg;
      msg << "sym_power: eigenvalue " << lambda << " at position " << i
          << " is negative beyond tolerance " << floor;
      throw DomainError(msg.str());
    }
    if (lambda <= floor) {
      if (exponent < 0.0) {
        std::ostringstream msg;
        msg << "sym_power: negative exponent " << exponent << " with singular input (eigenvalue "
            << lambda << ")";
        throw DomainError(msg.str());
      }
      mapped[i] = (exponent == 0.0) ? 1.0 : 0.0;
    } else {
      mapped[i] = std::pow(lambda, exponent);
    }
  }
  return SymmetricMatrix(assemble(s, mapped));
}

OrthonormalFrame gram_schmidt(const Matrix& w) {
  const Index rows = w.rows();
  const Index cols = w.cols();
  if (cols < 1 || rows < cols) {
    throw InputError("gram_schmidt: need an m' x k matrix with k >= 1 and m' >= k");
  }
  if (!w.allFinite()) {
    throw InputError("gram_schmidt: non-finite entries");
  }

  const double scale = w.colwise().norm().maxCoeff();
  const double pivot_floor = 1e-13 * std::max(scale, 1e-300);

  Matrix u = w;
  for (Index k = 0; k < cols; ++k) {
    // Modified Gram-Schmidt step plus one reorthogonalization pass; the
    // second pass keeps the frame orthonormal when the input is
    // ill-conditioned.
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < k; ++j) {
        u.col(k) -= u.col(j).dot(u.col(k)) * u.col(j);
      }
    }
    const double pivot = u.col(k).norm();
    if (!(pivot > pivot_floor)) {
      std::ostringstream msg;
      msg << "gram_schmidt: rank deficiency at column " << k << " (pivot " << pivot << ")";
      throw DegeneracyError(msg.str());
    }
    u.col(k) /= pivot;
    // MGS pivots are positive by construction, so <u_k, w_k> = pivot > 0
    // already satisfies the positive-diagonal convention.
  }
  return OrthonormalFrame{std::move(u)};
}

double frobenius_inner(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "frobenius_inner");
  return a.mat().cwiseProduct(b.mat()).sum();
}

}  // namespace spdgeo
