#ifndef SPDGEO_COMMANDS_HPP
#define SPDGEO_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "spdgeo/io.hpp"

namespace spdgeo {

// Process exit codes shared by the CLI. Usage errors exit with 1 (CLI11
// default).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitConvergence = 4;

/// The built-in 8-direction preset for 3x3 data: unit tangents at the Frechet
/// median along +/- the top three eigendirections of the log-scatter of the
/// data, plus the two normalized mixtures (v1 +/- v2).
std::vector<BoundaryDirection> preset_directions(const Dataset& data,
                                                 const OptimizerSettings& cfg);

/// Directions from a JSON file: array of {"dir": matrix, "base": matrix?};
/// a missing base means the Frechet median of the dataset. Directions are
/// normalized to unit metric norm at their base.
std::vector<BoundaryDirection> load_directions(const std::string& path, const Dataset& data,
                                               const OptimizerSettings& cfg);

struct QuantileRecord {
  std::string direction_id;  // "median" for the beta = 0 record
  double beta = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
  Matrix value;              // the quantile matrix
};

/// One record per (direction, beta) pair plus the median record. Grid cells
/// are computed in parallel; records come back sorted by (direction, beta)
/// regardless of schedule. Non-convergence is recorded per cell, not thrown.
std::vector<QuantileRecord> quantile_grid(const Dataset& data,
                                          const std::vector<BoundaryDirection>& directions,
                                          const std::vector<double>& betas,
                                          const OptimizerSettings& cfg);

/// Serial reference of quantile_grid, kept for testing and benchmarks.
std::vector<QuantileRecord> quantile_grid_serial(const Dataset& data,
                                                 const std::vector<BoundaryDirection>& directions,
                                                 const std::vector<double>& betas,
                                                 const OptimizerSettings& cfg);

void write_quantile_records(const std::vector<QuantileRecord>& records, const std::string& path);

// Subcommand entry points. Each returns a process exit code and reports
// errors on `err`.
struct QuantilesArgs {
  std::string input;
  Format format = Format::json;
  std::vector<double> betas;
  std::string directions = "preset";  // "preset" or a file path
  std::string out;
  OptimizerSettings cfg;
};
int cmd_quantiles(const QuantilesArgs& args, std::ostream& out, std::ostream& err);

struct RadialArgs {
  std::string base_spec;   // JSON matrix
  std::string dir_spec;    // JSON matrix
  std::string point_spec;  // JSON matrix
  double oracle_t = 0.0;   // > 0: also print the finite-t oracle and the gap
};
int cmd_radial(const RadialArgs& args, std::ostream& out, std::ostream& err);

struct BusemannArgs {
  std::string base_spec;
  std::string dir_spec;
  std::string point_spec;
  double tol = 1e-6;
};
int cmd_busemann(const BusemannArgs& args, std::ostream& out, std::ostream& err);

struct EllipsoidsArgs {
  std::string input;
  Format format = Format::json;
  std::string out;
};
int cmd_ellipsoids(const EllipsoidsArgs& args, std::ostream& out, std::ostream& err);

struct ValidateArgs {
  std::string input;
  Format format = Format::json;
};
int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err);

/// Parse an inline JSON matrix spec (e.g. "[[2,0],[0,1]]" or "4" for 1x1).
Matrix parse_matrix_spec(const std::string& spec);

}  // namespace spdgeo

#endif
