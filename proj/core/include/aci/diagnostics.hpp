#pragma once

#include <optional>
#include <vector>

#include "aci/generators.hpp"
#include "aci/iterations.hpp"

namespace aci {

inline constexpr double kDefaultSupportTol = 1e-8;
inline constexpr double kInterlacingTol = 1e-12;

enum class Subsequence { full, even, odd };
const char* to_string(Subsequence subsequence) noexcept;

/// Outcome of checking |w~_0| <= |v~_1| <= |w~_1| <= ... on a trace. Indices
/// refer to the merged sequence (|w~_0|, |v~_1|, |w~_1|, |v~_2|, ...).
struct InterlacingCheck {
  std::vector<std::size_t> violations;  // decreases by more than the tolerance
  std::vector<std::size_t> stationary;  // equal to the predecessor within tolerance
  bool confirmed() const noexcept { return violations.empty(); }
};

InterlacingCheck check_interlacing(const IterationTrace& trace, double tol = kInterlacingTol);

struct LimitReport {
  Vector limit_vector;
  Vector limit_w;  // T_A(limit_vector)
  Subsequence subsequence = Subsequence::full;
  double tau = 0.0;
  std::size_t limit_grade = 0;
  double fixed_point_residual = 0.0;
  /// Half-step polynomials P_s(z; v*) and P_s(z; w*) at the limit.
  MonicPolynomial poly_v;
  MonicPolynomial poly_w;

  // Eigenbasis fields; empty / absent for matrices without known eigendata.
  std::optional<Vector> coordinates;
  std::vector<double> block_norms;
  std::vector<std::size_t> support;  // block indices with norm > support_tol
  std::optional<double> tau_relation_residual;               // symmetric, s = 1
  std::optional<std::vector<double>> q_interpolation_residuals;  // symmetric
  std::optional<double> rayleigh_limit;                      // orthogonal, s = 1
};

/// Treats the newest iterate of a converged trace as the limit vector and
/// evaluates the limit relations on it. Throws ErrorKind::not_converged when
/// the trace did not stop on its difference tolerance.
LimitReport detect_limit(const IterationTrace& trace, const Matrix& a,
                         const Eigendata* eigendata = nullptr,
                         double support_tol = kDefaultSupportTol,
                         double grade_tol = kDefaultGradeTol);

/// |tau^2 - nu_i^2 (1 - nu_i^2) (lambda_i - lambda_j)^2| for a two-point
/// support {i, j} of a symmetric ACI(1) limit.
double verify_tau_relation(const LimitReport& report, const Eigendata& eigendata);

/// |Q(lambda_k) - tau^2| over the support, with Q = P_s(.; w*) P_s(.; v*).
std::vector<double> verify_q_interpolation(const LimitReport& report,
                                           const Eigendata& eigendata, std::size_t s);

struct BlockRate {
  std::size_t block = 0;
  double c = 0.0;
  double predicted_zeta = 0.0;
  /// exp(slope) of a least-squares fit of log |v_k^(j)|^2 against k.
  double empirical_zeta = 0.0;
};

struct RateReport {
  std::vector<BlockRate> blocks;
  std::size_t transient_cutoff = 0;
};

/// Per-block contraction of orthogonal ACI(1) with 0 < c_1 < ... < c_m. The
/// fit uses the second half of the trace; blocks other than the one with the
/// smallest c are reported.
RateReport estimate_contraction(const IterationTrace& trace, const Eigendata& eigendata);

struct ZeroFovLimits {
  double alpha_limit = 0.0;
  double beta_limit = 0.0;
};

/// Tail averages (last 10% of the records) of alpha_k and beta_k for an
/// orthogonal run whose start meets the 0 in F(A) hypotheses.
ZeroFovLimits check_zero_fov_case(const IterationTrace& trace, const Eigendata& eigendata);

}  // namespace aci
