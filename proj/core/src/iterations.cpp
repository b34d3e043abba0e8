#include "aci/iterations.hpp"

#include <cmath>
#include <string>

namespace aci {

void IterationConfig::validate() const {
  if (max_steps < 1) throw Error(ErrorKind::invalid_argument, "max_steps must be >= 1");
  if (!(diff_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "diff_tol must be > 0");
}

const char* to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::aci:
      return "aci";
    case Algorithm::aci_symmetric:
      return "aci_symmetric";
    case Algorithm::aci1_orthogonal:
      return "aci1_orthogonal";
    case Algorithm::cg:
      return "cg";
  }
  return "unknown";
}

const char* to_string(Termination termination) noexcept {
  switch (termination) {
    case Termination::diff_tol_reached:
      return "diff_tol_reached";
    case Termination::max_steps:
      return "max_steps";
    case Termination::breakdown:
      return "breakdown";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (Algorithm a : {Algorithm::aci, Algorithm::aci_symmetric, Algorithm::aci1_orthogonal,
                      Algorithm::cg}) {
    if (name == to_string(a)) return a;
  }
  throw Error(ErrorKind::invalid_argument, "unknown algorithm '" + name + "'");
}

Termination termination_from_string(const std::string& name) {
  for (Termination t :
       {Termination::diff_tol_reached, Termination::max_steps, Termination::breakdown}) {
    if (name == to_string(t)) return t;
  }
  throw Error(ErrorKind::invalid_argument, "unknown termination '" + name + "'");
}

namespace {

void require_unit(const Vector& v, const char* who) {
  if (std::abs(norm(v) - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, std::string(who) + ": start vector must have unit norm");
  }
}

void require_start_grade(const Matrix& a, const Vector& v0, std::size_t s, double grade_tol) {
  if (a.size() != v0.size()) {
    throw Error(ErrorKind::invalid_argument, "start vector dimension does not match matrix");
  }
  if (s == 0) throw Error(ErrorKind::invalid_argument, "restart length must be positive");
  if (s >= a.size()) throw Error(ErrorKind::invalid_argument, "restart length exceeds dimension");
  const std::size_t d = grade(a, v0, grade_tol);
  if (d < s + 1) {
    throw Error(ErrorKind::precondition,
                "start grade too small: d(A, v0) = " + std::to_string(d) +
                    " but the iteration needs d(A, v0) >= s + 1 = " + std::to_string(s + 1));
  }
}

[[noreturn]] void fail_breakdown(IterationTrace trace, const std::string& what) {
  trace.terminated_by = Termination::breakdown;
  if (!trace.records.empty()) trace.tau_estimate = trace.records.back().norm_v_tilde;
  throw BreakdownError("numerical breakdown: " + what, std::move(trace));
}

/// Shared driver: alternate projections with `first` and `second`. For the
/// cross iteration second = A^T, for the symmetric form second = A.
IterationTrace cross_iteration(const Matrix& first, const Matrix& second, std::size_t s,
                               const Vector& v0, const IterationConfig& cfg,
                               Algorithm algorithm, double grade_tol) {
  IterationTrace trace;
  trace.algorithm = algorithm;
  trace.s = s;
  trace.initial_v = v0;

  Vector v = v0;
  ProjectionResult pw = arnoldi_projection(first, v, s, grade_tol);
  if (!pw.w) fail_breakdown(std::move(trace), "first projection vanished at k = 0");

  for (std::size_t k = 0; k < cfg.max_steps; ++k) {
    const Vector& w = *pw.w;
    ProjectionResult pv = arnoldi_projection(second, w, s, grade_tol);
    if (!pv.w) {
      fail_breakdown(std::move(trace), "second projection vanished at k = " + std::to_string(k));
    }
    Vector v_next = *pv.w;
    ProjectionResult pw_next = arnoldi_projection(first, v_next, s, grade_tol);
    if (!pw_next.w) {
      fail_breakdown(std::move(trace), "first projection vanished at k = " + std::to_string(k + 1));
    }

    AciStepRecord rec;
    rec.k = k;
    rec.norm_w_tilde = pw.norm;
    rec.norm_v_tilde = pv.norm;
    if (s == 1) {
      rec.alpha = -pw.poly.low_coeffs()[0];
      rec.beta = -pv.poly.low_coeffs()[0];
    }
    rec.diff_v = distance(v_next, v);
    rec.diff_w = distance(*pw_next.w, w);
    rec.poly_v = pw.poly;
    rec.poly_w = pv.poly;
    if (cfg.record_vectors) {
      rec.v = v;
      rec.w = w;
    }
    const bool converged = rec.diff_v < cfg.diff_tol;
    trace.records.push_back(std::move(rec));

    v = std::move(v_next);
    pw = std::move(pw_next);
    if (converged) {
      trace.terminated_by = Termination::diff_tol_reached;
      break;
    }
  }
  trace.tau_estimate = trace.records.back().norm_v_tilde;
  trace.final_v = std::move(v);
  trace.final_w = std::move(*pw.w);
  return trace;
}

}  // namespace

IterationTrace aci_run(const Matrix& a, std::size_t s, const Vector& v0,
                       const IterationConfig& cfg, double grade_tol) {
  cfg.validate();
  require_unit(v0, "aci_run");
  require_start_grade(a, v0, s, grade_tol);
  return cross_iteration(a, a.transpose(), s, v0, cfg, Algorithm::aci, grade_tol);
}

IterationTrace aci_symmetric_run(const Matrix& a, std::size_t s, const Vector& v0,
                                 const IterationConfig& cfg, double grade_tol) {
  cfg.validate();
  if (!a.is_symmetric()) {
    throw Error(ErrorKind::invalid_argument, "aci_symmetric_run: matrix is not symmetric");
  }
  require_unit(v0, "aci_symmetric_run");
  require_start_grade(a, v0, s, grade_tol);
  return cross_iteration(a, a, s, v0, cfg, Algorithm::aci_symmetric, grade_tol);
}

RayleighStep aci1_rayleigh_step(const Matrix& a, const Vector& v, double grade_tol) {
  require_unit(v, "aci1_rayleigh_step");
  const Vector av = matvec(a, v);
  RayleighStep step;
  step.rho = dot(v, av);
  Vector next = av;
  axpy(-step.rho, v, next);
  step.norm = norm(next);
  if (step.norm <= grade_threshold(a, grade_tol)) {
    throw Error(ErrorKind::breakdown,
                "aci1_rayleigh_step: (A - rho I) v vanished; v is an eigenvector");
  }
  step.v_next = next / step.norm;
  return step;
}

IterationTrace aci1_orthogonal_run(const Matrix& a, const Vector& v0,
                                   const IterationConfig& cfg, double grade_tol) {
  cfg.validate();
  if (!a.is_orthogonal()) {
    throw Error(ErrorKind::invalid_argument, "aci1_orthogonal_run: matrix is not orthogonal");
  }
  require_unit(v0, "aci1_orthogonal_run");
  require_start_grade(a, v0, 1, grade_tol);

  constexpr double kIdentityTol = 1e-12;
  const double threshold = grade_threshold(a, grade_tol);

  IterationTrace trace;
  trace.algorithm = Algorithm::aci1_orthogonal;
  trace.s = 1;
  trace.initial_v = v0;

  // (A - alpha I) v with alpha = v^T A v; returns alpha and the unnormalized image.
  auto half_step = [](const Vector& x, const Vector& image) {
    const double rq = dot(x, image);
    Vector t = image;
    axpy(-rq, x, t);
    return std::pair{rq, t};
  };

  Vector v = v0;
  auto [alpha, w_tilde] = half_step(v, matvec(a, v));
  double norm_w = norm(w_tilde);
  if (norm_w <= threshold) fail_breakdown(std::move(trace), "w~ vanished at k = 0");
  Vector w = w_tilde / norm_w;

  for (std::size_t k = 0; k < cfg.max_steps; ++k) {
    auto [beta, v_tilde] = half_step(w, transpose_matvec(a, w));
    const double norm_v = norm(v_tilde);
    if (norm_v <= threshold) {
      fail_breakdown(std::move(trace), "v~ vanished at k = " + std::to_string(k));
    }
    if (std::abs(norm_w * norm_w - (1.0 - alpha * alpha)) > kIdentityTol) {
      fail_breakdown(std::move(trace),
                     "|w~|^2 = 1 - alpha^2 violated at k = " + std::to_string(k));
    }
    if (std::abs(norm_v * norm_v - (1.0 - beta * beta)) > kIdentityTol) {
      fail_breakdown(std::move(trace),
                     "|v~|^2 = 1 - beta^2 violated at k = " + std::to_string(k));
    }
    if (std::abs(beta) > std::abs(alpha) + kIdentityTol) {
      fail_breakdown(std::move(trace), "|beta| <= |alpha| violated at k = " + std::to_string(k));
    }
    Vector v_next = v_tilde / norm_v;

    auto [alpha_next, w_tilde_next] = half_step(v_next, matvec(a, v_next));
    const double norm_w_next = norm(w_tilde_next);
    if (norm_w_next <= threshold) {
      fail_breakdown(std::move(trace), "w~ vanished at k = " + std::to_string(k + 1));
    }
    Vector w_next = w_tilde_next / norm_w_next;

    AciStepRecord rec;
    rec.k = k;
    rec.norm_w_tilde = norm_w;
    rec.norm_v_tilde = norm_v;
    rec.alpha = alpha;
    rec.beta = beta;
    rec.diff_v = distance(v_next, v);
    rec.diff_w = distance(w_next, w);
    rec.poly_v = MonicPolynomial({-alpha});
    rec.poly_w = MonicPolynomial({-beta});
    if (cfg.record_vectors) {
      rec.v = v;
      rec.w = w;
    }
    const bool converged = rec.diff_v < cfg.diff_tol;
    trace.records.push_back(std::move(rec));

    v = std::move(v_next);
    w = std::move(w_next);
    alpha = alpha_next;
    norm_w = norm_w_next;
    if (converged) {
      trace.terminated_by = Termination::diff_tol_reached;
      break;
    }
  }
  trace.tau_estimate = trace.records.back().norm_v_tilde;
  trace.final_v = std::move(v);
  trace.final_w = std::move(w);
  return trace;
}

CgResult optimum_s_gradient_run(const Matrix& a, const Vector& b, const Vector& x0,
                                std::size_t s, const IterationConfig& cfg,
                                std::optional<double> residual_rtol, double grade_tol) {
  cfg.validate();
  const std::size_t n = a.size();
  if (b.size() != n || x0.size() != n) {
    throw Error(ErrorKind::invalid_argument, "optimum_s_gradient_run: dimension mismatch");
  }
  if (!a.is_symmetric()) {
    throw Error(ErrorKind::precondition, "optimum_s_gradient_run: matrix is not symmetric");
  }
  if (s == 0) throw Error(ErrorKind::invalid_argument, "restart length must be positive");
  if (s >= n) throw Error(ErrorKind::invalid_argument, "restart length exceeds dimension");
  const double rtol = residual_rtol.value_or(cfg.diff_tol);

  // Also the positive definiteness check.
  const Vector solution = cholesky_solve(a, b);

  auto residual = [&](const Vector& x) {
    Vector r = b;
    axpy(-1.0, matvec(a, x), r);
    return r;
  };
  auto a_norm_error = [&](const Vector& x) {
    const Vector e = solution - x;
    const double q = a_inner(a, e, e);
    if (q < 0.0) {
      throw Error(ErrorKind::breakdown, "loss of positive definiteness: negative A-inner product");
    }
    return std::sqrt(q);
  };

  Vector x = x0;
  Vector r = residual(x);
  const double r0 = norm(r);
  if (r0 == 0.0) throw Error(ErrorKind::precondition, "already converged");
  const std::size_t d = grade(a, r, grade_tol);
  if (d < s + 1) {
    throw Error(ErrorKind::precondition,
                "start grade too small: d(A, r0) = " + std::to_string(d) +
                    " but the method needs d(A, r0) >= s + 1 = " + std::to_string(s + 1));
  }

  CgResult result;
  Vector y_prev2, y_prev;
  for (std::size_t k = 0; k < cfg.max_steps; ++k) {
    const double rnorm = norm(r);
    Vector y = r / rnorm;

    CgStepRecord rec;
    rec.k = k;
    rec.residual_norm = rnorm;
    rec.a_norm_error = a_norm_error(x);
    if (k >= 2) rec.diff_y2 = distance(y, y_prev2);
    if (cfg.record_vectors) rec.y = y;
    const bool small_residual = rnorm < rtol * r0;
    // Both the even and the odd subsequence must have settled.
    const bool directions_settled = k >= 3 && rec.diff_y2 < cfg.diff_tol &&
                                    result.trace.back().diff_y2 < cfg.diff_tol;
    result.trace.push_back(std::move(rec));

    y_prev2 = std::move(y_prev);
    y_prev = std::move(y);
    if (small_residual || directions_settled) {
      result.terminated_by = Termination::diff_tol_reached;
      break;
    }
    if (k + 1 == cfg.max_steps) break;

    // s conjugate gradient steps from x_k, i.e. the A-orthogonal projection
    // onto x_k + K_s(A, r_k).
    Vector p = r;
    double rr = dot(r, r);
    for (std::size_t i = 0; i < s; ++i) {
      const Vector ap = matvec(a, p);
      const double pap = dot(p, ap);
      if (!(pap > 0.0)) {
        throw Error(ErrorKind::breakdown,
                    "loss of positive definiteness: p^T A p = " + std::to_string(pap));
      }
      const double step = rr / pap;
      axpy(step, p, x);
      axpy(-step, ap, r);
      const double rr_next = dot(r, r);
      if (rr_next == 0.0) break;
      const double beta = rr_next / rr;
      rr = rr_next;
      Vector p_next = r;
      axpy(beta, p, p_next);
      p = std::move(p_next);
    }
    // Restart from the true residual.
    r = residual(x);
    if (norm(r) == 0.0) {
      result.terminated_by = Termination::diff_tol_reached;
      break;
    }
  }
  result.solution_error = a_norm_error(x);
  result.final_y = y_prev;
  result.previous_y = y_prev2;
  return result;
}

}  // namespace aci
