#include "spdgeo/batch.hpp"

#include <exception>

namespace spdgeo::batch {

std::vector<SymmetricMatrix> radial_fields(const BoundaryDirection& xi,
                                           std::span<const SpdPoint> points) {
  const Index n = static_cast<Index>(points.size());
  std::vector<SymmetricMatrix> out(points.size(), SymmetricMatrix::zero(xi.dim()));
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    try {
      out[static_cast<size_t>(i)] = radial_field(xi, points[static_cast<size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<SymmetricMatrix> radial_fields_serial(const BoundaryDirection& xi,
                                                  std::span<const SpdPoint> points) {
  std::vector<SymmetricMatrix> out;
  out.reserve(points.size());
  for (const SpdPoint& x : points) {
    out.push_back(radial_field(xi, x));
  }
  return out;
}

std::vector<double> distances(const SpdPoint& p, std::span<const SpdPoint> points) {
  const Index n = static_cast<Index>(points.size());
  std::vector<double> out(points.size(), 0.0);
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    try {
      out[static_cast<size_t>(i)] = distance(p, points[static_cast<size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<double> distances_serial(const SpdPoint& p, std::span<const SpdPoint> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const SpdPoint& x : points) {
    out.push_back(distance(p, x));
  }
  return out;
}

}  // namespace spdgeo::batch
