#include "aci/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "aci/error.hpp"

namespace aci {

const char* to_string(Subsequence subsequence) noexcept {
  switch (subsequence) {
    case Subsequence::full:
      return "full";
    case Subsequence::even:
      return "even";
    case Subsequence::odd:
      return "odd";
  }
  return "unknown";
}

InterlacingCheck check_interlacing(const IterationTrace& trace, double tol) {
  std::vector<double> merged;
  merged.reserve(2 * trace.records.size());
  for (const auto& r : trace.records) {
    merged.push_back(r.norm_w_tilde);
    merged.push_back(r.norm_v_tilde);
  }
  InterlacingCheck out;
  for (std::size_t i = 1; i < merged.size(); ++i) {
    const double step = merged[i] - merged[i - 1];
    if (step < -tol) {
      out.violations.push_back(i);
    } else if (std::abs(step) <= tol) {
      out.stationary.push_back(i);
    }
  }
  return out;
}

namespace {

bool is_symmetric_kind(SpectrumKind kind) {
  return kind == SpectrumKind::symmetric || kind == SpectrumKind::spd;
}

}  // namespace

LimitReport detect_limit(const IterationTrace& trace, const Matrix& a,
                         const Eigendata* eigendata, double support_tol, double grade_tol) {
  if (trace.terminated_by != Termination::diff_tol_reached || trace.records.empty()) {
    throw Error(ErrorKind::not_converged,
                "detect_limit: no limit detected (trace terminated by " +
                    std::string(to_string(trace.terminated_by)) + ")");
  }
  if (eigendata && eigendata->dimension() != a.size()) {
    throw Error(ErrorKind::invalid_argument, "detect_limit: eigendata dimension mismatch");
  }

  LimitReport report;
  report.limit_vector = trace.final_v;
  report.subsequence =
      trace.algorithm == Algorithm::aci_symmetric ? Subsequence::even : Subsequence::full;
  report.tau = trace.tau_estimate;
  report.limit_grade = grade(a, report.limit_vector, grade_tol);

  const ProjectionResult first = arnoldi_projection(a, report.limit_vector, trace.s, grade_tol);
  if (!first.w) throw Error(ErrorKind::breakdown, "detect_limit: limit vector is invariant");
  const Matrix at = a.transpose();
  const ProjectionResult second = arnoldi_projection(at, *first.w, trace.s, grade_tol);
  if (!second.w) throw Error(ErrorKind::breakdown, "detect_limit: limit image is invariant");
  report.limit_w = *first.w;
  report.poly_v = first.poly;
  report.poly_w = second.poly;
  report.fixed_point_residual = distance(*second.w, report.limit_vector);

  if (!eigendata) return report;

  report.coordinates = eigendata->coordinates(report.limit_vector);
  report.block_norms = eigendata->block_norms(report.limit_vector);
  for (std::size_t i = 0; i < report.block_norms.size(); ++i) {
    if (report.block_norms[i] > support_tol) report.support.push_back(i);
  }
  if (is_symmetric_kind(eigendata->kind)) {
    if (trace.s == 1 && report.support.size() == 2) {
      report.tau_relation_residual = verify_tau_relation(report, *eigendata);
    }
    report.q_interpolation_residuals = verify_q_interpolation(report, *eigendata, trace.s);
  } else if (trace.s == 1) {
    report.rayleigh_limit = a_inner(a, report.limit_vector, report.limit_vector);
  }
  return report;
}

double verify_tau_relation(const LimitReport& report, const Eigendata& eigendata) {
  if (!is_symmetric_kind(eigendata.kind)) {
    throw Error(ErrorKind::invalid_argument, "verify_tau_relation: non-symmetric matrix");
  }
  if (report.support.size() != 2 || !report.coordinates) {
    throw Error(ErrorKind::precondition, "verify_tau_relation: support must have two points");
  }
  const auto& bi = eigendata.blocks[report.support[0]];
  const auto& bj = eigendata.blocks[report.support[1]];
  const double nu = (*report.coordinates)[bi.offset];
  const double gap = bi.re - bj.re;
  return std::abs(report.tau * report.tau - nu * nu * (1.0 - nu * nu) * gap * gap);
}

std::vector<double> verify_q_interpolation(const LimitReport& report,
                                           const Eigendata& eigendata, std::size_t s) {
  if (!is_symmetric_kind(eigendata.kind)) {
    throw Error(ErrorKind::invalid_argument, "verify_q_interpolation: non-symmetric matrix");
  }
  if (report.poly_v.degree() != s || report.poly_w.degree() != s) {
    throw Error(ErrorKind::invalid_argument, "verify_q_interpolation: polynomial degree mismatch");
  }
  const MonicPolynomial q = report.poly_w * report.poly_v;
  const double tau2 = report.tau * report.tau;
  std::vector<double> residuals;
  residuals.reserve(report.support.size());
  for (std::size_t i : report.support) {
    residuals.push_back(std::abs(q(eigendata.blocks[i].re) - tau2));
  }
  return residuals;
}

RateReport estimate_contraction(const IterationTrace& trace, const Eigendata& eigendata) {
  if (eigendata.kind != SpectrumKind::orthogonal || trace.s != 1) {
    throw Error(ErrorKind::invalid_argument,
                "estimate_contraction: requires an orthogonal matrix and s = 1");
  }
  std::size_t first = eigendata.blocks.size();
  for (std::size_t i = 0; i < eigendata.blocks.size(); ++i) {
    const auto& b = eigendata.blocks[i];
    if (!(b.re > 0.0)) {
      throw Error(ErrorKind::precondition,
                  "estimate_contraction: all real parts must be positive");
    }
    if (b.size == 2 && (first == eigendata.blocks.size() || b.re < eigendata.blocks[first].re)) {
      first = i;
    }
  }
  RateReport report;
  if (first == eigendata.blocks.size() || eigendata.blocks.size() < 2) return report;
  for (const auto& r : trace.records) {
    if (!r.v) {
      throw Error(ErrorKind::invalid_argument, "estimate_contraction: vectors were not recorded");
    }
  }
  const std::size_t count = trace.records.size();
  report.transient_cutoff = count / 2;
  const std::size_t window = count - report.transient_cutoff;
  if (window < 2) {
    throw Error(ErrorKind::precondition, "estimate_contraction: trace too short for a fit");
  }

  std::vector<std::vector<double>> norms;
  norms.reserve(window);
  for (std::size_t k = report.transient_cutoff; k < count; ++k) {
    norms.push_back(eigendata.block_norms(*trace.records[k].v));
  }

  const double c1 = eigendata.blocks[first].re;
  for (std::size_t j = 0; j < eigendata.blocks.size(); ++j) {
    if (j == first) continue;
    const auto& b = eigendata.blocks[j];
    BlockRate rate;
    rate.block = j;
    rate.c = b.re;
    if (b.size == 1) {
      const double q = (1.0 - c1) / (1.0 + c1);
      rate.predicted_zeta = q * q;
    } else {
      const double q = 1.0 + 2.0 * c1 * (c1 - b.re) / (1.0 - c1 * c1);
      rate.predicted_zeta = q * q;
    }
    // Least-squares slope of log |v^(j)|^2 against the step index.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0;
    for (std::size_t t = 0; t < window; ++t) {
      const double nb = norms[t][j];
      if (!(nb > 0.0)) continue;
      const double x = static_cast<double>(t);
      const double y = 2.0 * std::log(nb);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++used;
    }
    if (used < 2) {
      rate.empirical_zeta = 0.0;
    } else {
      const double m = static_cast<double>(used);
      rate.empirical_zeta = std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
    }
    report.blocks.push_back(rate);
  }
  return report;
}

ZeroFovLimits check_zero_fov_case(const IterationTrace& trace, const Eigendata& eigendata) {
  if (eigendata.kind != SpectrumKind::orthogonal || trace.s != 1) {
    throw Error(ErrorKind::invalid_argument,
                "check_zero_fov_case: requires an orthogonal matrix and s = 1");
  }
  if (trace.records.empty()) {
    throw Error(ErrorKind::precondition, "check_zero_fov_case: empty trace");
  }
  constexpr double present = 1e-12;
  const auto norms = eigendata.block_norms(trace.initial_v);
  bool met = false;
  for (std::size_t l = 0; l < eigendata.blocks.size() && !met; ++l) {
    if (eigendata.blocks[l].size != 2 || !(norms[l] > present)) continue;
    for (std::size_t j = 0; j < eigendata.blocks.size(); ++j) {
      if (j != l && norms[j] > present &&
          eigendata.blocks[l].re * eigendata.blocks[j].re <= 0.0) {
        met = true;
        break;
      }
    }
  }
  if (!met) {
    throw Error(ErrorKind::precondition,
                "check_zero_fov_case: hypotheses unmet (need a rotation block l and a block j "
                "in the start's support with c_l c_j <= 0)");
  }
  const std::size_t count = trace.records.size();
  const std::size_t tail = std::max<std::size_t>(1, count / 10);
  ZeroFovLimits out;
  for (std::size_t k = count - tail; k < count; ++k) {
    out.alpha_limit += trace.records[k].alpha;
    out.beta_limit += trace.records[k].beta;
  }
  out.alpha_limit /= static_cast<double>(tail);
  out.beta_limit /= static_cast<double>(tail);
  return out;
}

}  // namespace aci
