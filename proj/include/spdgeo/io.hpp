#ifndef SPDGEO_IO_HPP
#define SPDGEO_IO_HPP

#include <string>
#include <vector>

#include "spdgeo/quantile.hpp"

namespace spdgeo {

enum class Format { json, csv };

Format parse_format(const std::string& name);

/// JSON: array of {"id": string, "matrix": row-major nested arrays}.
/// CSV: first line "m=<dim>", then one row-major upper-triangle row per
/// matrix, m(m+1)/2 columns; ids are assigned by record index.
/// Matrices are validated symmetric to 1e-8 (then symmetrized exactly) and
/// strictly positive definite; dimensions must be uniform.
Dataset load_dataset(const std::string& path, Format fmt);

void save_dataset(const Dataset& data, const std::string& path, Format fmt);

/// SPD matrix rendered as an ellipsoid: descending eigenvalues are the axis
/// lengths, the matching eigenvectors the axes.
struct EllipsoidGlyph {
  std::string center_id;
  Vector axis_lengths;  // positive, descending
  Matrix axes;          // orthogonal, columns are axes
};

EllipsoidGlyph make_glyph(const std::string& id, const SpdPoint& x);

void write_glyphs(const std::vector<EllipsoidGlyph>& glyphs, const std::string& path);

}  // namespace spdgeo

#endif
