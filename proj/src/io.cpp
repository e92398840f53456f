#include "spdgeo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spdgeo {

namespace {

constexpr double kSymmetryTol = 1e-8;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
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

void write_vector_json(std::ostream& os, const Vector& v) {
  os << "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << fmt17(v[i]);
  }
  os << "]";
}

SpdPoint validated_point(Matrix a, size_t record, const std::string& id) {
  const auto where = [&](const std::string& what) {
    std::ostringstream msg;
    msg << "matrix " << record << " (id '" << id << "'): " << what;
    return msg.str();
  };
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw InputError(where("not square"));
  }
  if (!a.allFinite()) {
    throw InputError(where("non-finite entries"));
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    std::ostringstream msg;
    msg << "asymmetric beyond tolerance (max |a_ij - a_ji| = " << asym << ")";
    throw InputError(where(msg.str()));
  }
  try {
    return SpdPoint(std::move(a));
  } catch (const DomainError& e) {
    throw DomainError(where(e.what()));
  }
}

Dataset load_json(const std::string& path) {
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
    throw ParseError("'" + path + "': expected a nonempty array of records");
  }
  std::vector<SpdPoint> points;
  std::vector<std::string> labels;
  points.reserve(doc.size());
  for (size_t r = 0; r < doc.size(); ++r) {
    const auto& rec = doc[r];
    if (!rec.is_object() || !rec.contains("matrix")) {
      std::ostringstream msg;
      msg << "'" << path << "': record " << r << " has no \"matrix\"";
      throw ParseError(msg.str());
    }
    std::string id = rec.value("id", std::to_string(r));
    const auto& mj = rec["matrix"];
    if (!mj.is_array() || mj.empty()) {
      std::ostringstream msg;
      msg << "'" << path << "': record " << r << ": \"matrix\" is not a nonempty array";
      throw ParseError(msg.str());
    }
    const size_t m = mj.size();
    Matrix a(static_cast<Index>(m), static_cast<Index>(m));
    for (size_t i = 0; i < m; ++i) {
      if (!mj[i].is_array() || mj[i].size() != m) {
        std::ostringstream msg;
        msg << "'" << path << "': record " << r << ": row " << i << " is not a length-" << m
            << " array";
        throw ParseError(msg.str());
      }
      for (size_t j = 0; j < m; ++j) {
        if (!mj[i][j].is_number()) {
          std::ostringstream msg;
          msg << "'" << path << "': record " << r << ": entry (" << i << "," << j
              << ") is not a number";
          throw ParseError(msg.str());
        }
        a(static_cast<Index>(i), static_cast<Index>(j)) = mj[i][j].get<double>();
      }
    }
    points.push_back(validated_point(std::move(a), r, id));
    labels.push_back(std::move(id));
  }
  return Dataset(std::move(points), std::move(labels));
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::string line;
  size_t lineno = 0;
  // Header: m=<dim>
  Index m = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("m=", 0) != 0) {
      std::ostringstream msg;
      msg << "'" << path << "' line " << lineno << ": expected header 'm=<dim>'";
      throw ParseError(msg.str());
    }
    try {
      m = std::stol(line.substr(2));
    } catch (...) {
      throw ParseError("'" + path + "': malformed header '" + line + "'");
    }
    break;
  }
  if (m < 1) {
    throw ParseError("'" + path + "': missing or invalid header");
  }
  const Index expected = m * (m + 1) / 2;

  std::vector<SpdPoint> points;
  std::vector<std::string> labels;
  size_t record = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (...) {
        std::ostringstream msg;
        msg << "'" << path << "' line " << lineno << ": bad number '" << cell << "'";
        throw ParseError(msg.str());
      }
    }
    if (static_cast<Index>(vals.size()) != expected) {
      std::ostringstream msg;
      msg << "'" << path << "' line " << lineno << ": expected " << expected << " columns, got "
          << vals.size();
      throw ParseError(msg.str());
    }
    Matrix a(m, m);
    Index k = 0;
    for (Index i = 0; i < m; ++i) {
      for (Index j = i; j < m; ++j) {
        a(i, j) = a(j, i) = vals[static_cast<size_t>(k++)];
      }
    }
    std::string id = std::to_string(record);
    points.push_back(validated_point(std::move(a), record, id));
    labels.push_back(std::move(id));
    ++record;
  }
  if (points.empty()) {
    throw ParseError("'" + path + "': no records");
  }
  return Dataset(std::move(points), std::move(labels));
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw InputError("unknown format '" + name + "', expected json or csv");
}

Dataset load_dataset(const std::string& path, Format fmt) {
  return fmt == Format::json ? load_json(path) : load_csv(path);
}

void save_dataset(const Dataset& data, const std::string& path, Format fmt) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  if (fmt == Format::json) {
    out << "[\n";
    for (Index i = 0; i < data.size(); ++i) {
      out << "  {\"id\": \"" << json_escape(data.label(i)) << "\", \"matrix\": ";
      write_matrix_json(out, data.point(i).mat());
      out << "}" << (i + 1 < data.size() ? "," : "") << "\n";
    }
    out << "]\n";
  } else {
    const Index m = data.dim();
    out << "m=" << m << "\n";
    for (Index r = 0; r < data.size(); ++r) {
      const Matrix& a = data.point(r).mat();
      bool first = true;
      for (Index i = 0; i < m; ++i) {
        for (Index j = i; j < m; ++j) {
          if (!first) out << ",";
          out << fmt17(a(i, j));
          first = false;
        }
      }
      out << "\n";
    }
  }
}

EllipsoidGlyph make_glyph(const std::string& id, const SpdPoint& x) {
  SpectralDecomposition s = eig_sym(SymmetricMatrix(x.mat()));
  if (!(s.eigenvalues.minCoeff() > 0.0)) {
    throw DomainError("make_glyph: input is not positive definite");
  }
  return EllipsoidGlyph{id, s.eigenvalues, s.eigenvectors};
}

void write_glyphs(const std::vector<EllipsoidGlyph>& glyphs, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  out << "[\n";
  for (size_t i = 0; i < glyphs.size(); ++i) {
    const EllipsoidGlyph& g = glyphs[i];
    out << "  {\"center_id\": \"" << json_escape(g.center_id) << "\", \"axis_lengths\": ";
    write_vector_json(out, g.axis_lengths);
    out << ", \"axes\": ";
    write_matrix_json(out, g.axes);
    out << "}" << (i + 1 < glyphs.size() ? "," : "") << "\n";
  }
  out << "]\n";
}

}  // namespace spdgeo
