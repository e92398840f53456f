#include "spdgeo/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "spdgeo/batch.hpp"

namespace spdgeo {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void write_matrix_json(std::ostream& os, const Matrix& a) {
  os << "[";
  for (Index i = 0; i < a.rows(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) os << ", ";
      os << fmt17(a(i, j));
    }
    os << "]";
  }
  os << "]";
}

SymmetricMatrix normalized_direction(const SpdPoint& base, const SymmetricMatrix& raw) {
  const double norm = metric_norm(base, raw);
  if (!(norm > 0.0)) {
    throw InputError("direction has zero metric norm");
  }
  return SymmetricMatrix(raw.mat() / norm);
}

void print_matrix(std::ostream& os, const Matrix& a, const char* indent = "  ") {
  for (Index i = 0; i < a.rows(); ++i) {
    os << indent;
    for (Index j = 0; j < a.cols(); ++j) {
      os << fmt17(a(i, j)) << (j + 1 < a.cols() ? " " : "");
    }
    os << "\n";
  }
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const InputError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

Matrix parse_matrix_spec(const std::string& spec) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(spec);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("matrix spec '" + spec + "': " + e.what());
  }
  if (doc.is_number()) {
    Matrix a(1, 1);
    a(0, 0) = doc.get<double>();
    return a;
  }
  if (!doc.is_array() || doc.empty()) {
    throw ParseError("matrix spec '" + spec + "': expected a number or nested arrays");
  }
  const size_t m = doc.size();
  Matrix a(static_cast<Index>(m), static_cast<Index>(m));
  for (size_t i = 0; i < m; ++i) {
    if (!doc[i].is_array() || doc[i].size() != m) {
      throw ParseError("matrix spec '" + spec + "': row " + std::to_string(i) + " is not length " +
                       std::to_string(m));
    }
    for (size_t j = 0; j < m; ++j) {
      if (!doc[i][j].is_number()) {
        throw ParseError("matrix spec '" + spec + "': non-numeric entry");
      }
      a(static_cast<Index>(i), static_cast<Index>(j)) = doc[i][j].get<double>();
    }
  }
  return a;
}

std::vector<BoundaryDirection> preset_directions(const Dataset& data,
                                                 const OptimizerSettings& cfg) {
  if (data.dim() != 3) {
    throw InputError("preset directions are defined for 3x3 data only");
  }
  const SpdPoint med = frechet_median(data, cfg);
  const std::vector<SymmetricMatrix> basis = tangent_basis(med);
  const Index k = static_cast<Index>(basis.size());

  // Scatter of the log coordinates in the metric-orthonormal basis at the
  // median; its top eigendirections pick the data's principal tangents.
  Matrix scatter = Matrix::Zero(k, k);
  for (Index i = 0; i < data.size(); ++i) {
    const SymmetricMatrix t = log_map(med, data.point(i));
    Vector c(k);
    for (Index b = 0; b < k; ++b) {
      c[b] = metric_inner(med, t, basis[b]);
    }
    scatter += c * c.transpose();
  }
  scatter /= static_cast<double>(data.size());
  SpectralDecomposition s = eig_sym(SymmetricMatrix(std::move(scatter)));

  const auto tangent_of = [&](Vector coeff) {
    // Deterministic sign: make the largest-magnitude coefficient positive.
    Index imax = 0;
    for (Index i = 1; i < coeff.size(); ++i) {
      if (std::abs(coeff[i]) > std::abs(coeff[imax])) imax = i;
    }
    if (coeff[imax] < 0.0) coeff = -coeff;
    Matrix t = Matrix::Zero(3, 3);
    for (Index b = 0; b < k; ++b) {
      t += coeff[b] * basis[b].mat();
    }
    return SymmetricMatrix(std::move(t));
  };

  SymmetricMatrix z1 = tangent_of(s.eigenvectors.col(0));
  SymmetricMatrix z2 = tangent_of(s.eigenvectors.col(1));
  SymmetricMatrix z3 = tangent_of(s.eigenvectors.col(2));

  std::vector<BoundaryDirection> out;
  out.reserve(8);
  const auto push = [&](const Matrix& t) {
    out.emplace_back(med, normalized_direction(med, SymmetricMatrix(t)));
  };
  push(z1.mat());
  push(-z1.mat());
  push(z2.mat());
  push(-z2.mat());
  push(z3.mat());
  push(-z3.mat());
  push(z1.mat() + z2.mat());
  push(z1.mat() - z2.mat());
  return out;
}

std::vector<BoundaryDirection> load_directions(const std::string& path, const Dataset& data,
                                               const OptimizerSettings& cfg) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw ParseError("'" + path + "': expected a nonempty array of directions");
  }

  std::optional<SpdPoint> median;
  std::vector<BoundaryDirection> out;
  for (size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    if (!rec.is_object() || !rec.contains("dir")) {
      throw ParseError("'" + path + "': direction " + std::to_string(i) + " has no \"dir\"");
    }
    Matrix dir = parse_matrix_spec(rec["dir"].dump());
    SpdPoint base = [&]() {
      if (rec.contains("base")) {
        return SpdPoint(parse_matrix_spec(rec["base"].dump()));
      }
      if (!median) median = frechet_median(data, cfg);
      return *median;
    }();
    require_same_dim(base.dim(), data.dim(), "load_directions");
    out.emplace_back(base, normalized_direction(base, SymmetricMatrix(std::move(dir))));
  }
  return out;
}

namespace {

std::vector<QuantileRecord> grid_impl(const Dataset& data,
                                      const std::vector<BoundaryDirection>& directions,
                                      const std::vector<double>& betas,
                                      const OptimizerSettings& cfg, bool parallel) {
  for (double b : betas) {
    if (!(b >= 0.0 && b < 1.0)) {
      std::ostringstream msg;
      msg << "quantile_grid: beta " << b << " outside [0, 1)";
      throw InputError(msg.str());
    }
  }

  const Index cells = static_cast<Index>(directions.size() * betas.size());
  std::vector<QuantileRecord> records(static_cast<size_t>(cells) + 1);

  {
    QuantileRecord& med = records[0];
    OptimizerReport rep;
    SpdPoint value = frechet_median_nothrow(data, cfg, rep);
    med.direction_id = "median";
    med.beta = 0.0;
    med.converged = rep.converged;
    med.iterations = rep.iterations;
    med.grad_norm = rep.grad_norm;
    med.value = value.mat();
  }

  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (Index cell = 0; cell < cells; ++cell) {
    try {
      const size_t di = static_cast<size_t>(cell) / betas.size();
      const size_t bi = static_cast<size_t>(cell) % betas.size();
      QuantileRecord& rec = records[static_cast<size_t>(cell) + 1];
      OptimizerReport rep;
      QuantileIndex q(betas[bi], directions[di]);
      SpdPoint value = quantile_nothrow(data, q, cfg, rep);
      rec.direction_id = std::to_string(di);
      rec.beta = betas[bi];
      rec.converged = rep.converged;
      rec.iterations = rep.iterations;
      rec.grad_norm = rep.grad_norm;
      rec.value = value.mat();
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return records;
}

}  // namespace

std::vector<QuantileRecord> quantile_grid(const Dataset& data,
                                          const std::vector<BoundaryDirection>& directions,
                                          const std::vector<double>& betas,
                                          const OptimizerSettings& cfg) {
  return grid_impl(data, directions, betas, cfg, true);
}

std::vector<QuantileRecord> quantile_grid_serial(const Dataset& data,
                                                 const std::vector<BoundaryDirection>& directions,
                                                 const std::vector<double>& betas,
                                                 const OptimizerSettings& cfg) {
  return grid_impl(data, directions, betas, cfg, false);
}

void write_quantile_records(const std::vector<QuantileRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  out << "[\n";
  for (size_t i = 0; i < records.size(); ++i) {
    const QuantileRecord& r = records[i];
    EllipsoidGlyph glyph = make_glyph(r.direction_id, SpdPoint::assume_spd(r.value));
    out << "  {\"direction\": \"" << json_escape(r.direction_id) << "\", \"beta\": "
        << fmt17(r.beta) << ", \"converged\": " << (r.converged ? "true" : "false")
        << ", \"iterations\": " << r.iterations << ", \"grad_norm\": " << fmt17(r.grad_norm)
        << ", \"matrix\": ";
    write_matrix_json(out, r.value);
    out << ", \"glyph\": {\"axis_lengths\": ";
    out << "[";
    for (Index k = 0; k < glyph.axis_lengths.size(); ++k) {
      if (k) out << ", ";
      out << fmt17(glyph.axis_lengths[k]);
    }
    out << "], \"axes\": ";
    write_matrix_json(out, glyph.axes);
    out << "}}" << (i + 1 < records.size() ? "," : "") << "\n";
  }
  out << "]\n";
}

int cmd_quantiles(const QuantilesArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    Dataset data = load_dataset(args.input, args.format);
    std::vector<BoundaryDirection> dirs =
        (args.directions == "preset") ? preset_directions(data, args.cfg)
                                      : load_directions(args.directions, data, args.cfg);
    std::vector<QuantileRecord> records = quantile_grid(data, dirs, args.betas, args.cfg);
    write_quantile_records(records, args.out);
    size_t failed = 0;
    for (const QuantileRecord& r : records) {
      if (!r.converged) ++failed;
    }
    out << "wrote " << records.size() << " records to " << args.out << "\n";
    if (failed > 0) {
      err << failed << " record(s) did not reach the gradient tolerance\n";
      return kExitConvergence;
    }
    return kExitOk;
  });
}

int cmd_radial(const RadialArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    SpdPoint base(parse_matrix_spec(args.base_spec));
    SymmetricMatrix dir(parse_matrix_spec(args.dir_spec));
    SpdPoint x(parse_matrix_spec(args.point_spec));
    BoundaryDirection xi(base, normalized_direction(base, dir));
    SymmetricMatrix field = radial_field(xi, x);
    out << "radial field at x:\n";
    print_matrix(out, field.mat());
    out << "metric norm: " << fmt17(metric_norm(x, field)) << "\n";
    if (args.oracle_t > 0.0) {
      SymmetricMatrix oracle = radial_field_oracle(xi, x, args.oracle_t);
      out << "finite-t evaluation (t = " << args.oracle_t << "):\n";
      print_matrix(out, oracle.mat());
      out << "frobenius gap: " << fmt17((field.mat() - oracle.mat()).norm()) << "\n";
    }
    return kExitOk;
  });
}

int cmd_busemann(const BusemannArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    SpdPoint base(parse_matrix_spec(args.base_spec));
    SymmetricMatrix dir(parse_matrix_spec(args.dir_spec));
    SpdPoint x(parse_matrix_spec(args.point_spec));
    BoundaryDirection xi(base, normalized_direction(base, dir));
    out << fmt17(busemann(xi, x, args.tol)) << "\n";
    return kExitOk;
  });
}

int cmd_ellipsoids(const EllipsoidsArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    Dataset data = load_dataset(args.input, args.format);
    std::vector<EllipsoidGlyph> glyphs;
    glyphs.reserve(static_cast<size_t>(data.size()));
    for (Index i = 0; i < data.size(); ++i) {
      glyphs.push_back(make_glyph(data.label(i), data.point(i)));
    }
    write_glyphs(glyphs, args.out);
    out << "wrote " << glyphs.size() << " glyphs to " << args.out << "\n";
    return kExitOk;
  });
}

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    Dataset data = load_dataset(args.input, args.format);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Index i = 0; i < data.size(); ++i) {
      SpectralDecomposition s = eig_sym(SymmetricMatrix(data.point(i).mat()));
      lo = std::min(lo, s.eigenvalues.minCoeff());
      hi = std::max(hi, s.eigenvalues.maxCoeff());
    }
    out << "ok: " << data.size() << " matrices of dimension " << data.dim()
        << ", eigenvalues in [" << fmt17(lo) << ", " << fmt17(hi) << "]\n";
    return kExitOk;
  });
}

}  // namespace spdgeo
