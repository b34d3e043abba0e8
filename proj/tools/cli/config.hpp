#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aci/generators.hpp"
#include "aci/iterations.hpp"

namespace aci::cli {

struct StartConfig {
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> vector;
  std::optional<std::size_t> min_grade;  // defaults to s + 1
  std::vector<std::size_t> nonzero_blocks;
};

struct CgConfig {
  std::optional<std::vector<double>> rhs;  // defaults to zero
  std::optional<double> residual_rtol;     // 0 disables the residual stop
};

struct RunConfig {
  std::optional<SpectrumSpec> spec;
  std::optional<Matrix> matrix;  // inline rows or "matrix_file"
  Algorithm algorithm = Algorithm::aci;
  std::size_t s = 1;
  StartConfig start;
  IterationConfig iteration;
  CgConfig cg;
  double support_tol = 1e-8;
  std::size_t sweep_starts = 50;
  std::string trace_path = "trace.csv";
  std::string report_path = "report.json";
  std::string manifest_path = "run.json";

  /// Checks algorithm / spec compatibility; throws ErrorKind::invalid_argument.
  void validate() const;
};

/// Parses a RunConfig JSON document. "matrix_file" paths are resolved
/// relative to base_dir. Unknown fields are rejected by name.
RunConfig parse_run_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

/// Matrix JSON: {"rows": [[...], ...]} or a bare array of rows.
Matrix parse_matrix_json(const std::string& text);

}  // namespace aci::cli
