#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aci/linalg.hpp"

namespace aci {

/// p(z) = z^s + c_{s-1} z^{s-1} + ... + c_0. The leading 1 is implicit.
class MonicPolynomial {
 public:
  MonicPolynomial() = default;
  explicit MonicPolynomial(std::vector<double> low_coeffs)
      : low_coeffs_(std::move(low_coeffs)) {}

  static MonicPolynomial from_roots(std::span<const double> roots);

  std::size_t degree() const noexcept { return low_coeffs_.size(); }
  const std::vector<double>& low_coeffs() const noexcept { return low_coeffs_; }

  double operator()(double z) const;
  std::complex<double> operator()(std::complex<double> z) const;

  /// Product of two monic polynomials (again monic).
  friend MonicPolynomial operator*(const MonicPolynomial& p, const MonicPolynomial& q);
  /// p(z) * z^k
  MonicPolynomial shifted(std::size_t k) const;

  bool operator==(const MonicPolynomial&) const = default;

 private:
  std::vector<double> low_coeffs_;
};

/// The Arnoldi projection of a unit vector v: the component of A^s v
/// orthogonal to K_s(A, v), together with its monic polynomial.
struct ProjectionResult {
  Vector w_tilde;
  std::optional<Vector> w;  // w_tilde / |w_tilde|, absent when w_tilde = 0
  MonicPolynomial poly;
  double norm = 0.0;
};

/// Computes w~ = P_s(A; v) v with w~ orthogonal to K_s(A, v).
///
/// Requires |v| = 1 (to 1e-12) and s < n. When d(A, v) <= s the projection is
/// zero and poly is the minimal polynomial of v padded with powers of z.
ProjectionResult arnoldi_projection(const Matrix& a, const Vector& v, std::size_t s,
                                    double grade_tol = kDefaultGradeTol);

/// p(A) v by Horner's scheme.
Vector evaluate_monic(const MonicPolynomial& poly, const Matrix& a, const Vector& v);

/// Characteristic polynomial of the leading s x s block of the Hessenberg
/// matrix of a Krylov basis. For s <= dimension() it coincides with the
/// Arnoldi polynomial P_s(z; v); used as an independent recovery route.
MonicPolynomial hessenberg_polynomial(const KrylovBasis& basis, std::size_t s);

struct SpectralNormOptions {
  std::size_t max_sweeps = 100;
};

/// Largest singular value, from a Jacobi eigen-solve of A^T A.
double spectral_norm(const Matrix& a, const SpectralNormOptions& options = {});

struct IdealArnoldiS1 {
  double alpha_star = 0.0;
  double value = 0.0;
};

struct IdealArnoldiOptions {
  SpectralNormOptions spectral;
  double bracket_width = 1e-12;
};

/// argmin / min over real alpha of |A - alpha I|_2 (golden-section search).
IdealArnoldiS1 ideal_arnoldi_s1(const Matrix& a, const IdealArnoldiOptions& options = {});

/// Same problem for a normal matrix given its eigenvalues: the real center of
/// the smallest disk containing them. Solved by enumerating the candidate
/// centers (parabola vertices and pairwise intersections).
IdealArnoldiS1 ideal_arnoldi_s1_normal(std::span<const std::complex<double>> eigenvalues);

struct WorstCaseOptions {
  std::size_t aci_max_steps = 2000;
  double aci_diff_tol = 1e-10;
  std::size_t polish_iterations = 400;
  double grade_tol = kDefaultGradeTol;
};

struct WorstCaseEstimate {
  double phi_hat = 0.0;
  Vector argmax_vector;
  std::size_t best_start = 0;
};

/// Multi-start lower bound on the worst-case Arnoldi value Phi_s(A).
///
/// Every start runs the cross iteration to its limit and is then refined by
/// projected gradient ascent of |P_s(A; v) v| on the unit sphere. Each start
/// draws from its own generator seeded by (seed, start index), so the result
/// does not depend on evaluation order. Ties go to the lower start index.
WorstCaseEstimate worst_case_arnoldi_estimate(const Matrix& a, std::size_t s,
                                              std::size_t n_starts, std::uint64_t seed,
                                              const WorstCaseOptions& options = {});

/// Local maximization of |P_s(A; v) v| over unit v, starting from v0.
/// Returns the improved vector; the value is recomputed by the caller.
Vector polish_worst_case(const Matrix& a, std::size_t s, Vector v0,
                         std::size_t iterations, double grade_tol = kDefaultGradeTol);

}  // namespace aci
