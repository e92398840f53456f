#ifndef SPDGEO_BATCH_HPP
#define SPDGEO_BATCH_HPP

#include <span>
#include <vector>

#include "spdgeo/radial.hpp"

namespace spdgeo::batch {

/// radial_field(xi, x) for each x, OpenMP-parallel over points.
std::vector<SymmetricMatrix> radial_fields(const BoundaryDirection& xi,
                                           std::span<const SpdPoint> points);

/// Serial reference kept for testing the parallel kernel.
std::vector<SymmetricMatrix> radial_fields_serial(const BoundaryDirection& xi,
                                                  std::span<const SpdPoint> points);

/// distance(p, x_i) for each point, OpenMP-parallel.
std::vector<double> distances(const SpdPoint& p, std::span<const SpdPoint> points);

std::vector<double> distances_serial(const SpdPoint& p, std::span<const SpdPoint> points);

}  // namespace spdgeo::batch

#endif
