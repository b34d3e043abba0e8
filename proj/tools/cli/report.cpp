#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aci/diagnostics.hpp"
#include "aci/error.hpp"
#include "json.hpp"
#include "trace_io.hpp"

namespace aci::cli {

namespace {

using nlohmann::json;

[[noreturn]] void manifest_error(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, "run manifest: " + what);
}

template <typename T>
T field(const json& obj, const char* key) {
  if (!obj.contains(key)) manifest_error(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    manifest_error(std::string("field '") + key + "' has the wrong type");
  }
}

json rows_json(const Matrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) rows.push_back(a.row(i).entries());
  return rows;
}

json indices_json(const std::vector<std::size_t>& xs) { return json(xs); }

std::vector<std::size_t> support_of(const std::vector<double>& norms, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] > tol) out.push_back(i);
  }
  return out;
}

json limit_json(const LimitReport& limit) {
  json out;
  out["subsequence"] = to_string(limit.subsequence);
  out["tau"] = limit.tau;
  out["limit_grade"] = limit.limit_grade;
  out["fixed_point_residual"] = limit.fixed_point_residual;
  out["limit_vector"] = limit.limit_vector.entries();
  out["limit_w"] = limit.limit_w.entries();
  out["poly_v"] = limit.poly_v.low_coeffs();
  out["poly_w"] = limit.poly_w.low_coeffs();
  if (limit.coordinates) {
    out["coordinates"] = limit.coordinates->entries();
    out["block_norms"] = limit.block_norms;
    out["support"] = indices_json(limit.support);
  }
  if (limit.tau_relation_residual) out["tau_relation_residual"] = *limit.tau_relation_residual;
  if (limit.q_interpolation_residuals) {
    out["q_interpolation_residuals"] = *limit.q_interpolation_residuals;
  }
  if (limit.rayleigh_limit) out["rayleigh_limit"] = *limit.rayleigh_limit;
  return out;
}

json aci_report(const RunManifest& m, const std::string& csv) {
  IterationTrace trace = read_aci_trace_csv(csv);
  trace.algorithm = m.algorithm;
  trace.s = m.s;
  trace.terminated_by = m.terminated_by;
  trace.initial_v = m.start;
  const TestMatrix tm = m.test_matrix();
  const std::size_t n = tm.a.size();
  if (trace.final_v.size() != n) {
    manifest_error("trace dimension " + std::to_string(trace.final_v.size()) +
                   " does not match matrix dimension " + std::to_string(n));
  }
  const Eigendata* eig = m.spec ? &tm.eigendata : nullptr;

  json report;
  report["algorithm"] = to_string(m.algorithm);
  report["s"] = m.s;
  report["n"] = n;
  report["steps"] = trace.records.size();
  report["terminated_by"] = to_string(trace.terminated_by);
  const bool converged = trace.terminated_by == Termination::diff_tol_reached;
  report["converged"] = converged;

  const InterlacingCheck inter = check_interlacing(trace);
  report["interlacing"] = {{"confirmed", inter.confirmed()},
                           {"violations", indices_json(inter.violations)},
                           {"stationary", inter.stationary.size()}};

  const auto& last = trace.records.back();
  report["final_step"] = {{"norm_w_tilde", last.norm_w_tilde}, {"norm_v_tilde", last.norm_v_tilde},
                          {"alpha", last.alpha},               {"beta", last.beta},
                          {"diff_v", last.diff_v},             {"diff_w", last.diff_w}};

  std::optional<LimitReport> limit;
  if (converged) limit = detect_limit(trace, tm.a, eig, m.support_tol, kDefaultGradeTol);
  report["limit"] = limit ? limit_json(*limit) : json(nullptr);

  const bool orthogonal_s1 = eig && eig->kind == SpectrumKind::orthogonal && m.s == 1;
  report["rates"] = nullptr;
  if (orthogonal_s1 && m.iteration.record_vectors) {
    try {
      const RateReport rates = estimate_contraction(trace, *eig);
      json blocks = json::array();
      for (const auto& b : rates.blocks) {
        blocks.push_back({{"block", b.block},
                          {"c", b.c},
                          {"predicted_zeta", b.predicted_zeta},
                          {"empirical_zeta", b.empirical_zeta}});
      }
      report["rates"] = {{"transient_cutoff", rates.transient_cutoff}, {"blocks", blocks}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition) throw;
    }
  }

  report["zero_fov"] = nullptr;
  if (orthogonal_s1) {
    try {
      const ZeroFovLimits z = check_zero_fov_case(trace, *eig);
      json out = {{"alpha_limit", z.alpha_limit}, {"beta_limit", z.beta_limit}};
      const auto initial = support_of(eig->block_norms(trace.initial_v), m.support_tol);
      out["initial_support"] = indices_json(initial);
      if (limit) {
        out["limit_support"] = indices_json(limit->support);
        out["support_preserved"] = limit->support == initial;
      }
      report["zero_fov"] = std::move(out);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition) throw;
    }
  }
  return report;
}

json cg_report(const RunManifest& m, const std::string& csv) {
  const CgResult result = read_cg_trace_csv(csv);
  const auto& rows = result.trace;
  const std::size_t count = rows.size();

  json report;
  report["algorithm"] = "cg";
  report["s"] = m.s;
  report["n"] = m.start.size();
  report["steps"] = count;
  report["terminated_by"] = to_string(m.terminated_by);
  report["final_residual_norm"] = rows.back().residual_norm;
  report["final_a_norm_error"] = rows.back().a_norm_error;

  json even = nullptr, odd = nullptr;
  for (std::size_t k = count; k-- > 0 && (even.is_null() || odd.is_null());) {
    if (std::isnan(rows[k].diff_y2)) continue;
    json& slot = (k % 2 == 0) ? even : odd;
    if (slot.is_null()) slot = rows[k].diff_y2;
  }
  report["even_diff_y2"] = even;
  report["odd_diff_y2"] = odd;

  report["limit_angle_deg"] = nullptr;
  if (!result.final_y.empty() && !result.previous_y.empty()) {
    const double c = std::clamp(std::abs(dot(result.final_y, result.previous_y)), 0.0, 1.0);
    report["limit_angle_deg"] = std::acos(c) * 180.0 / std::numbers::pi;
  }

  report["error_ratio"] = nullptr;
  report["error_ratio_drift"] = nullptr;
  auto ratio = [&](std::size_t k) { return rows[k].a_norm_error / rows[k - 1].a_norm_error; };
  if (count >= 2 && rows[count - 2].a_norm_error > 0.0) {
    report["error_ratio"] = ratio(count - 1);
    if (count >= 3 && rows[count - 3].a_norm_error > 0.0) {
      report["error_ratio_drift"] = std::abs(ratio(count - 1) - ratio(count - 2));
    }
  }
  return report;
}

}  // namespace

TestMatrix RunManifest::test_matrix() const {
  if (spec) return make_matrix(*spec);
  if (!matrix) manifest_error("no matrix source");
  TestMatrix out;
  out.a = *matrix;
  return out;
}

std::string manifest_to_json(const RunManifest& m) {
  json out;
  out["algorithm"] = to_string(m.algorithm);
  out["s"] = m.s;
  if (m.spec) out["spec"] = json::parse(spectrum_to_json(*m.spec));
  if (m.matrix) out["matrix"] = rows_json(*m.matrix);
  out["start"] = m.start.entries();
  out["iteration"] = {{"max_steps", m.iteration.max_steps},
                      {"diff_tol", m.iteration.diff_tol},
                      {"record_vectors", m.iteration.record_vectors},
                      {"seed", m.iteration.seed}};
  out["support_tol"] = m.support_tol;
  out["terminated_by"] = to_string(m.terminated_by);
  if (m.algorithm == Algorithm::cg) {
    out["cg"] = {{"rhs", m.cg_rhs.entries()},
                 {"residual_rtol",
                  m.cg_residual_rtol ? json(*m.cg_residual_rtol) : json(nullptr)}};
  }
  return out.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    manifest_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) manifest_error("expected a JSON object");

  RunManifest m;
  m.algorithm = algorithm_from_string(field<std::string>(doc, "algorithm"));
  m.s = field<std::size_t>(doc, "s");
  if (doc.contains("spec")) m.spec = spectrum_from_json(doc.at("spec").dump());
  if (doc.contains("matrix")) m.matrix = parse_matrix_json(doc.at("matrix").dump());
  if (m.spec.has_value() == m.matrix.has_value()) {
    manifest_error("exactly one of 'spec' and 'matrix' is required");
  }
  m.start = Vector(field<std::vector<double>>(doc, "start"));
  if (!doc.contains("iteration") || !doc.at("iteration").is_object()) {
    manifest_error("missing field 'iteration'");
  }
  const json& it = doc.at("iteration");
  m.iteration.max_steps = field<std::size_t>(it, "max_steps");
  m.iteration.diff_tol = field<double>(it, "diff_tol");
  m.iteration.record_vectors = field<bool>(it, "record_vectors");
  m.iteration.seed = field<std::uint64_t>(it, "seed");
  m.support_tol = field<double>(doc, "support_tol");
  m.terminated_by = termination_from_string(field<std::string>(doc, "terminated_by"));
  if (m.algorithm == Algorithm::cg) {
    if (!doc.contains("cg") || !doc.at("cg").is_object()) manifest_error("missing field 'cg'");
    const json& cg = doc.at("cg");
    m.cg_rhs = Vector(field<std::vector<double>>(cg, "rhs"));
    if (cg.contains("residual_rtol") && !cg.at("residual_rtol").is_null()) {
      m.cg_residual_rtol = field<double>(cg, "residual_rtol");
    }
  }
  const std::size_t n = m.spec ? m.spec->dimension() : m.matrix->size();
  if (m.start.size() != n) manifest_error("field 'start' has the wrong dimension");
  return m;
}

std::string build_report(const RunManifest& manifest, const std::string& trace_csv) {
  const json report = manifest.algorithm == Algorithm::cg ? cg_report(manifest, trace_csv)
                                                          : aci_report(manifest, trace_csv);
  return report.dump(2) + "\n";
}

}  // namespace aci::cli
