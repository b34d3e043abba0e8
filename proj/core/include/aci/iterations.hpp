#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aci/error.hpp"
#include "aci/linalg.hpp"
#include "aci/projection.hpp"

namespace aci {

struct IterationConfig {
  std::size_t max_steps = 100000;
  double diff_tol = 1e-12;
  bool record_vectors = false;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Algorithm { aci, aci_symmetric, aci1_orthogonal, cg };
enum class Termination { diff_tol_reached, max_steps, breakdown };

const char* to_string(Algorithm algorithm) noexcept;
const char* to_string(Termination termination) noexcept;
Algorithm algorithm_from_string(const std::string& name);
Termination termination_from_string(const std::string& name);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One cross step k: v_k -> w_k -> v_{k+1}.
///
/// For the symmetric driver a record covers two single-operator steps, so
/// v = v_{2k}, w = v_{2k+1}, and diff_v / diff_w are the even / odd
/// subsequence differences. This makes the two drivers' traces comparable
/// record for record.
struct AciStepRecord {
  std::size_t k = 0;
  std::optional<Vector> v;
  std::optional<Vector> w;
  double norm_w_tilde = 0.0;  // |w~_k|
  double norm_v_tilde = 0.0;  // |v~_{k+1}|
  double alpha = kNaN;        // v_k^T A v_k   (s = 1 only)
  double beta = kNaN;         // w_k^T A w_k   (s = 1 only)
  double diff_v = 0.0;        // |v_{k+1} - v_k|
  double diff_w = 0.0;        // |w_{k+1} - w_k|
  MonicPolynomial poly_v;
  MonicPolynomial poly_w;
};

struct IterationTrace {
  Algorithm algorithm = Algorithm::aci;
  std::size_t s = 1;
  std::vector<AciStepRecord> records;
  Termination terminated_by = Termination::max_steps;
  double tau_estimate = 0.0;
  Vector initial_v;
  /// Newest iterate v_{K+1} and its half-step image w_{K+1}.
  Vector final_v;
  Vector final_w;
};

/// Thrown when a run hits a numerical breakdown; carries the partial trace.
class BreakdownError : public Error {
 public:
  BreakdownError(const std::string& message, IterationTrace trace)
      : Error(ErrorKind::breakdown, message), trace_(std::move(trace)) {}

  const IterationTrace& trace() const noexcept { return trace_; }

 private:
  IterationTrace trace_;
};

/// Arnoldi cross iteration ACI(s) with alternating projections by A and A^T.
IterationTrace aci_run(const Matrix& a, std::size_t s, const Vector& v0,
                       const IterationConfig& cfg,
                       double grade_tol = kDefaultGradeTol);

/// Single-operator form for symmetric A: v_{k+1} = P_s(A; v_k) v_k / norm.
/// Stops when the even-subsequence difference |v_{k+2} - v_k| < diff_tol.
IterationTrace aci_symmetric_run(const Matrix& a, std::size_t s, const Vector& v0,
                                 const IterationConfig& cfg,
                                 double grade_tol = kDefaultGradeTol);

struct RayleighStep {
  Vector v_next;
  double rho = 0.0;
  double norm = 0.0;
};

/// v -> (A - rho I) v / |.|, rho = v^T A v.
RayleighStep aci1_rayleigh_step(const Matrix& a, const Vector& v,
                                double grade_tol = kDefaultGradeTol);

/// Two-sided Rayleigh form of ACI(1) for orthogonal A. Every step checks
/// |w~|^2 = 1 - alpha^2, |v~|^2 = 1 - beta^2 and |beta| <= |alpha|.
IterationTrace aci1_orthogonal_run(const Matrix& a, const Vector& v0,
                                   const IterationConfig& cfg,
                                   double grade_tol = kDefaultGradeTol);

struct CgStepRecord {
  std::size_t k = 0;
  std::optional<Vector> y;
  double residual_norm = 0.0;
  double a_norm_error = 0.0;
  double diff_y2 = kNaN;  // |y_k - y_{k-2}|, NaN for k < 2
};

struct CgResult {
  std::vector<CgStepRecord> trace;
  double solution_error = 0.0;  // final |x - x_k|_A
  Termination terminated_by = Termination::max_steps;
  /// The last two normalized residuals y_{K-1}, y_K.
  Vector previous_y;
  Vector final_y;
};

/// Optimum s-gradient method: s CG steps from x_k, restart, and
/// record y_k = r_k / |r_k|. Stops when |r_k| < residual_rtol |r_0|, when
/// |y_{k+2} - y_k| < diff_tol for both parities, or at max_steps. residual_rtol defaults to
/// cfg.diff_tol.
CgResult optimum_s_gradient_run(const Matrix& a, const Vector& b, const Vector& x0,
                                std::size_t s, const IterationConfig& cfg,
                                std::optional<double> residual_rtol = std::nullopt,
                                double grade_tol = kDefaultGradeTol);

}  // namespace aci
