#pragma once

#include <optional>
#include <string>

#include "aci/generators.hpp"
#include "aci/iterations.hpp"
#include "config.hpp"

namespace aci::cli {

/// Everything needed to rebuild the diagnostics from a stored trace: the
/// matrix source, algorithm, start vector and termination.
struct RunManifest {
  std::optional<SpectrumSpec> spec;
  std::optional<Matrix> matrix;
  Algorithm algorithm = Algorithm::aci;
  std::size_t s = 1;
  Vector start;
  IterationConfig iteration;
  double support_tol = 1e-8;
  Termination terminated_by = Termination::max_steps;
  Vector cg_rhs;
  std::optional<double> cg_residual_rtol;

  /// The matrix with its eigendata when built from a spec.
  TestMatrix test_matrix() const;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

/// Diagnostics report for a stored run, pretty-printed JSON with a trailing
/// newline. Depends only on the manifest and the CSV text, so a report built
/// at run time and one rebuilt by `analyze` are byte-identical.
std::string build_report(const RunManifest& manifest, const std::string& trace_csv);

}  // namespace aci::cli
