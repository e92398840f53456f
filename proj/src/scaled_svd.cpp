#include "spdgeo/scaled_svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace spdgeo {

namespace {

// Beyond this log-scale gap a Jacobi rotation reduces to orthogonalizing the
// small column against the large one; the dropped correction to the large
// column is of relative size exp(2 * gap).
constexpr double kExtremeGap = 100.0;
constexpr double kOrthTol = 1e-15;
constexpr int kMaxSweeps = 60;

}  // namespace

ScaledSvd scaled_svd(const Matrix& w, const Vector& log_scales) {
  const Index rows = w.rows();
  const Index cols = w.cols();
  if (cols < 1 || rows < cols) {
    throw InputError("scaled_svd: need an m' x k matrix with k >= 1 and m' >= k");
  }
  if (log_scales.size() != cols) {
    throw InputError("scaled_svd: one log scale per column required");
  }
  if (!w.allFinite() || !log_scales.allFinite()) {
    throw InputError("scaled_svd: non-finite input");
  }

  // Columns kept as unit vectors with separate log magnitudes.
  Matrix q = w;
  Vector ell(cols);
  for (Index j = 0; j < cols; ++j) {
    const double norm = q.col(j).norm();
    if (!(norm > 0.0)) {
      std::ostringstream msg;
      msg << "scaled_svd: column " << j << " is zero";
      throw DegeneracyError(msg.str());
    }
    q.col(j) /= norm;
    ell[j] = log_scales[j] + std::log(norm);
  }

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (Index a = 0; a < cols - 1; ++a) {
      for (Index b = a + 1; b < cols; ++b) {
        // i is the column with the larger log magnitude.
        const Index i = (ell[a] >= ell[b]) ? a : b;
        const Index j = (ell[a] >= ell[b]) ? b : a;
        double dot = std::clamp(q.col(i).dot(q.col(j)), -1.0, 1.0);
        if (std::abs(dot) <= kOrthTol) continue;
        converged = false;

        const double delta = ell[j] - ell[i];  // <= 0
        Vector vi, vj;
        if (delta < -kExtremeGap) {
          vi = q.col(i);
          vj = q.col(j) - dot * q.col(i);
        } else {
          const double zeta = (std::exp(delta) - std::exp(-delta)) / (2.0 * dot);
          const double tan_theta =
              (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
          const double cos_theta = 1.0 / std::sqrt(1.0 + tan_theta * tan_theta);
          const double sin_theta = tan_theta * cos_theta;
          vi = cos_theta * q.col(i) - (sin_theta * std::exp(delta)) * q.col(j);
          // sin_theta shrinks like dot * exp(delta), so this factor stays
          // O(|dot|) even though exp(-delta) alone can reach e^100.
          vj = (sin_theta * std::exp(-delta)) * q.col(i) + cos_theta * q.col(j);
        }
        const double ni = vi.norm();
        const double nj = vj.norm();
        if (!(ni > 0.0) || !(nj > 0.0)) {
          std::ostringstream msg;
          msg << "scaled_svd: columns " << a << " and " << b << " are numerically dependent";
          throw DegeneracyError(msg.str());
        }
        q.col(i) = vi / ni;
        q.col(j) = vj / nj;
        ell[i] += std::log(ni);
        ell[j] += std::log(nj);
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("scaled_svd: Jacobi sweeps did not converge");
  }

  std::vector<Index> order(static_cast<size_t>(cols));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return ell[a] > ell[b]; });

  ScaledSvd out;
  out.left.resize(rows, cols);
  out.log_sigma.resize(cols);
  for (Index j = 0; j < cols; ++j) {
    out.left.col(j) = q.col(order[static_cast<size_t>(j)]);
    out.log_sigma[j] = ell[order[static_cast<size_t>(j)]];
  }
  return out;
}

}  // namespace spdgeo
