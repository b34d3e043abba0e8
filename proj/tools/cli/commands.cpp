#include "commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aci/diagnostics.hpp"
#include "json.hpp"
#include "report.hpp"
#include "trace_io.hpp"

namespace aci::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kClusterAngle = 1e-6;

TestMatrix build_matrix(const RunConfig& cfg) {
  if (cfg.spec) return make_matrix(*cfg.spec);
  TestMatrix out;
  out.a = *cfg.matrix;
  return out;
}

Vector resolve_start(const RunConfig& cfg, const TestMatrix& tm, std::uint64_t seed) {
  if (cfg.start.vector) {
    const Vector v(*cfg.start.vector);
    if (norm(v) == 0.0) throw Error(ErrorKind::invalid_argument, "config: 'start.vector' is zero");
    return normalized(v);
  }
  if (!cfg.spec && !cfg.start.nonzero_blocks.empty()) {
    throw Error(ErrorKind::invalid_argument,
                "config: 'start.nonzero_blocks' needs a spec with known eigendata");
  }
  StartConstraints constraints;
  constraints.min_grade = std::min(cfg.start.min_grade.value_or(cfg.s + 1), tm.a.size());
  constraints.nonzero_blocks = cfg.start.nonzero_blocks;
  return random_unit_start(tm, seed, constraints);
}

IterationTrace run_aci(const RunConfig& cfg, const Matrix& a, const Vector& v0) {
  switch (cfg.algorithm) {
    case Algorithm::aci:
      return aci_run(a, cfg.s, v0, cfg.iteration);
    case Algorithm::aci_symmetric:
      return aci_symmetric_run(a, cfg.s, v0, cfg.iteration);
    case Algorithm::aci1_orthogonal:
      return aci1_orthogonal_run(a, v0, cfg.iteration);
    case Algorithm::cg:
      break;
  }
  throw Error(ErrorKind::invalid_argument, "config: 'cg' is not a cross iteration");
}

std::uint64_t start_seed(std::uint64_t base, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

struct StartSummary {
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::string message;
  std::size_t steps = 0;
  std::string terminated_by;
  double tau = kNaN;
  double diff_v = kNaN;
  double fixed_point_residual = kNaN;
  std::optional<std::size_t> support_size;
  std::optional<Vector> limit;
};

StartSummary sweep_start(const RunConfig& cfg, const TestMatrix& tm, std::uint64_t seed) {
  StartSummary out;
  out.seed = seed;
  try {
    const Vector v0 = resolve_start(cfg, tm, seed);
    const IterationTrace trace = run_aci(cfg, tm.a, v0);
    out.steps = trace.records.size();
    out.terminated_by = to_string(trace.terminated_by);
    out.tau = trace.tau_estimate;
    out.diff_v = trace.records.back().diff_v;
    if (trace.terminated_by == Termination::diff_tol_reached) {
      const LimitReport limit =
          detect_limit(trace, tm.a, cfg.spec ? &tm.eigendata : nullptr, cfg.support_tol);
      out.fixed_point_residual = limit.fixed_point_residual;
      if (limit.coordinates) out.support_size = limit.support.size();
      out.limit = limit.limit_vector;
    }
  } catch (const BreakdownError& e) {
    out.status = to_string(e.kind());
    out.message = e.what();
    out.steps = e.trace().records.size();
    out.terminated_by = to_string(Termination::breakdown);
  } catch (const Error& e) {
    out.status = to_string(e.kind());
    out.message = e.what();
  }
  return out;
}

/// Angle between the lines spanned by unit vectors u and v.
double line_angle(const Vector& u, const Vector& v) {
  const double sign = dot(u, v) < 0.0 ? -1.0 : 1.0;
  Vector d = v;
  axpy(-sign, u, d);
  return 2.0 * std::asin(std::min(1.0, 0.5 * norm(d)));
}

json phi_hat_json(const Matrix& a, const RunConfig& cfg, std::uint64_t base) {
  try {
    const WorstCaseEstimate fwd = worst_case_arnoldi_estimate(a, cfg.s, cfg.sweep_starts, base);
    const WorstCaseEstimate bwd =
        worst_case_arnoldi_estimate(a.transpose(), cfg.s, cfg.sweep_starts, base);
    return {{"a", fwd.phi_hat},
            {"a_transpose", bwd.phi_hat},
            {"gap", std::abs(fwd.phi_hat - bwd.phi_hat)},
            {"best_start_a", fwd.best_start},
            {"best_start_a_transpose", bwd.best_start}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::precondition) throw;
    return {{"error", e.what()}};
  }
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return 2;
    case ErrorKind::precondition:
      return 3;
    case ErrorKind::breakdown:
      return 4;
    case ErrorKind::not_converged:
      return 1;
  }
  return 1;
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) {
    cfg.iteration.seed = *o.seed;
    if (!cfg.start.vector) cfg.start.seed = *o.seed;
  }
  if (o.max_steps) cfg.iteration.max_steps = *o.max_steps;
  if (o.diff_tol) cfg.iteration.diff_tol = *o.diff_tol;
  if (o.starts) cfg.sweep_starts = *o.starts;
  cfg.validate();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunOutputs execute_run(const RunConfig& cfg) {
  cfg.validate();
  const TestMatrix tm = build_matrix(cfg);
  const Vector v0 = resolve_start(cfg, tm, cfg.start.seed.value_or(cfg.iteration.seed));

  RunManifest m;
  m.spec = cfg.spec;
  m.matrix = cfg.matrix;
  m.algorithm = cfg.algorithm;
  m.s = cfg.s;
  m.start = v0;
  m.iteration = cfg.iteration;
  m.support_tol = cfg.support_tol;

  RunOutputs out;
  if (cfg.algorithm == Algorithm::cg) {
    // The report needs the limit directions, so residuals are always stored.
    m.iteration.record_vectors = true;
    m.cg_rhs = cfg.cg.rhs ? Vector(*cfg.cg.rhs) : Vector(tm.a.size());
    m.cg_residual_rtol = cfg.cg.residual_rtol;
    const CgResult result =
        optimum_s_gradient_run(tm.a, m.cg_rhs, v0, cfg.s, m.iteration, m.cg_residual_rtol);
    m.terminated_by = result.terminated_by;
    out.trace_csv = write_cg_trace_csv(result);
  } else {
    const IterationTrace trace = run_aci(cfg, tm.a, v0);
    m.terminated_by = trace.terminated_by;
    out.trace_csv = write_aci_trace_csv(trace);
  }
  out.manifest_json = manifest_to_json(m);
  out.report_json = execute_analyze(out.trace_csv, out.manifest_json);
  return out;
}

void cmd_run(const RunConfig& cfg, const std::string& out_dir) {
  const RunOutputs out = execute_run(cfg);
  const fs::path dir(out_dir);
  write_file_atomic((dir / cfg.trace_path).string(), out.trace_csv);
  write_file_atomic((dir / cfg.manifest_path).string(), out.manifest_json);
  write_file_atomic((dir / cfg.report_path).string(), out.report_json);
}

SweepOutputs execute_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.algorithm == Algorithm::cg) {
    throw Error(ErrorKind::invalid_argument, "config: sweeps support the cross iterations only");
  }
  if (cfg.start.vector) {
    throw Error(ErrorKind::invalid_argument, "config: sweeps need seeded starts, not 'start.vector'");
  }
  const TestMatrix tm = build_matrix(cfg);
  const std::uint64_t base = cfg.start.seed.value_or(cfg.iteration.seed);
  const std::size_t starts = cfg.sweep_starts;

  std::vector<StartSummary> results(starts);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::min<std::size_t>(starts, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < starts; i = next++) {
        results[i] = sweep_start(cfg, tm, start_seed(base, i));
      }
    });
  }
  for (auto& th : pool) th.join();

  SweepOutputs out;
  out.summary_csv =
      "start,seed,status,steps,terminated_by,tau,diff_v,fixed_point_residual,support_size,"
      "message\n";
  std::size_t converged = 0, failed = 0;
  double max_tau = kNaN;
  std::vector<Vector> representatives;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < starts; ++i) {
    const StartSummary& r = results[i];
    out.summary_csv += std::to_string(i) + "," + std::to_string(r.seed) + "," + r.status + "," +
                       std::to_string(r.steps) + "," + r.terminated_by + "," +
                       format_double(r.tau) + "," + format_double(r.diff_v) + "," +
                       format_double(r.fixed_point_residual) + "," +
                       (r.support_size ? std::to_string(*r.support_size) : "") + "," +
                       csv_quote(r.message) + "\n";
    if (r.status != "ok") {
      ++failed;
      continue;
    }
    if (!std::isnan(r.tau) && (std::isnan(max_tau) || r.tau > max_tau)) max_tau = r.tau;
    if (!r.limit) continue;
    ++converged;
    std::size_t c = 0;
    while (c < representatives.size() && line_angle(representatives[c], *r.limit) > kClusterAngle) {
      ++c;
    }
    if (c == representatives.size()) {
      representatives.push_back(*r.limit);
      sizes.push_back(0);
    }
    ++sizes[c];
  }

  json agg;
  agg["algorithm"] = to_string(cfg.algorithm);
  agg["s"] = cfg.s;
  agg["n"] = tm.a.size();
  agg["starts"] = starts;
  agg["seed"] = base;
  agg["converged"] = converged;
  agg["failed"] = failed;
  agg["max_tau"] = std::isnan(max_tau) ? json(nullptr) : json(max_tau);
  json reps = json::array();
  for (const auto& v : representatives) reps.push_back(v.entries());
  agg["clusters"] = {{"angular_tol", kClusterAngle},
                     {"count", representatives.size()},
                     {"sizes", sizes},
                     {"representatives", reps}};
  agg["phi_hat"] = phi_hat_json(tm.a, cfg, base);
  out.aggregate_json = agg.dump(2) + "\n";
  return out;
}

void cmd_sweep(const RunConfig& cfg, const std::string& out_dir) {
  const SweepOutputs out = execute_sweep(cfg);
  const fs::path dir(out_dir);
  write_file_atomic((dir / "sweep_summary.csv").string(), out.summary_csv);
  write_file_atomic((dir / "sweep.json").string(), out.aggregate_json);
}

std::string execute_analyze(const std::string& trace_csv, const std::string& manifest_json) {
  return build_report(manifest_from_json(manifest_json), trace_csv);
}

void cmd_analyze(const std::string& trace_path, const std::string& manifest_path,
                 const std::string& out_dir, const std::string& report_name) {
  const std::string report =
      execute_analyze(read_text_file(trace_path), read_text_file(manifest_path));
  write_file_atomic((fs::path(out_dir) / report_name).string(), report);
}

}  // namespace aci::cli
