#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aci/error.hpp"
#include "config.hpp"

namespace aci::cli {

/// 0 success, 1 other failure, 2 config / input error, 3 precondition
/// violation, 4 numerical breakdown.
int exit_code(ErrorKind kind) noexcept;

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_steps;
  std::optional<double> diff_tol;
  std::optional<std::size_t> starts;
};

void apply_overrides(RunConfig& cfg, const Overrides& overrides);

/// Writes via a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

struct RunOutputs {
  std::string trace_csv;
  std::string manifest_json;
  std::string report_json;
};

/// Executes one run and renders its outputs without touching the filesystem.
RunOutputs execute_run(const RunConfig& cfg);

/// execute_run plus writing the three files below out_dir. Nothing is
/// written when the run fails.
void cmd_run(const RunConfig& cfg, const std::string& out_dir);

struct SweepOutputs {
  std::string summary_csv;
  std::string aggregate_json;
};

/// Runs cfg.sweep_starts seeded starts in parallel. Per-start failures are
/// recorded in the summary; the sweep itself only fails on config errors.
SweepOutputs execute_sweep(const RunConfig& cfg);
void cmd_sweep(const RunConfig& cfg, const std::string& out_dir);

/// Rebuilds the report of a stored run from its trace and manifest.
std::string execute_analyze(const std::string& trace_csv, const std::string& manifest_json);
void cmd_analyze(const std::string& trace_path, const std::string& manifest_path,
                 const std::string& out_dir, const std::string& report_name = "report.json");

}  // namespace aci::cli
