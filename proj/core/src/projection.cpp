#include "aci/projection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "aci/error.hpp"
#include "aci/iterations.hpp"

namespace aci {

namespace {

// Full coefficient vectors, lowest degree first.
using Coeffs = std::vector<double>;

Coeffs multiply(const Coeffs& p, const Coeffs& q) {
  Coeffs r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

Coeffs full_coeffs(const MonicPolynomial& p) {
  Coeffs c = p.low_coeffs();
  c.push_back(1.0);
  return c;
}

MonicPolynomial from_full(Coeffs c) {
  c.pop_back();
  return MonicPolynomial(std::move(c));
}

/// Solves the leading d x d upper-triangular system R c = rhs.
std::vector<double> back_substitute(const std::vector<std::vector<double>>& r,
                                    std::vector<double> rhs) {
  const std::size_t d = rhs.size();
  for (std::size_t ii = d; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t j = ii + 1; j < d; ++j) s -= r[ii][j] * rhs[j];
    rhs[ii] = s / r[ii][ii];
  }
  return rhs;
}

/// Monic polynomial of degree d (= basis dimension or requested degree) from
/// the coordinates of v, Av, ..., A^d v in the orthonormal Krylov basis.
MonicPolynomial polynomial_from_coordinates(const Matrix& a, const Vector& v,
                                            const KrylovBasis& basis, std::size_t d) {
  std::vector<Vector> powers;
  powers.reserve(d + 1);
  powers.push_back(v);
  for (std::size_t j = 1; j <= d; ++j) powers.push_back(matvec(a, powers.back()));

  // r[i][j] = q_i^T A^j v
  std::vector<std::vector<double>> r(d, std::vector<double>(d + 1, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j <= d; ++j) r[i][j] = dot(basis.columns[i], powers[j]);

  std::vector<double> rhs(d);
  for (std::size_t i = 0; i < d; ++i) rhs[i] = -r[i][d];
  return MonicPolynomial(back_substitute(r, std::move(rhs)));
}

double golden_section(const auto& f, double lo, double hi, double width) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > width) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
    // Stop once the bracket no longer shrinks in floating point.
    if (!(x1 > lo && x1 < hi) || !(x2 > lo && x2 < hi)) break;
  }
  return f1 <= f2 ? x1 : x2;
}

Vector gaussian_vector(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (double& x : v) x = normal(gen);
  return v;
}

std::mt19937_64 start_generator(std::uint64_t seed, std::size_t start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(start) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

MonicPolynomial MonicPolynomial::from_roots(std::span<const double> roots) {
  Coeffs c{1.0};
  for (double r : roots) c = multiply(c, Coeffs{-r, 1.0});
  return from_full(std::move(c));
}

double MonicPolynomial::operator()(double z) const {
  double acc = 1.0;
  for (std::size_t i = low_coeffs_.size(); i-- > 0;) acc = acc * z + low_coeffs_[i];
  return acc;
}

std::complex<double> MonicPolynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 1.0;
  for (std::size_t i = low_coeffs_.size(); i-- > 0;) acc = acc * z + low_coeffs_[i];
  return acc;
}

MonicPolynomial operator*(const MonicPolynomial& p, const MonicPolynomial& q) {
  return from_full(multiply(full_coeffs(p), full_coeffs(q)));
}

MonicPolynomial MonicPolynomial::shifted(std::size_t k) const {
  Coeffs c(k, 0.0);
  c.insert(c.end(), low_coeffs_.begin(), low_coeffs_.end());
  return MonicPolynomial(std::move(c));
}

ProjectionResult arnoldi_projection(const Matrix& a, const Vector& v, std::size_t s,
                                    double grade_tol) {
  if (a.size() != v.size()) {
    throw Error(ErrorKind::invalid_argument, "arnoldi_projection: dimension mismatch");
  }
  if (s == 0) throw Error(ErrorKind::invalid_argument, "restart length must be positive");
  if (s >= a.size()) {
    throw Error(ErrorKind::invalid_argument, "restart length exceeds dimension");
  }
  if (std::abs(norm(v) - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, "arnoldi_projection: start vector must have unit norm");
  }

  const KrylovBasis basis = krylov_basis(a, v, s, grade_tol);
  ProjectionResult result;
  if (basis.breakdown) {
    // d(A, v) <= s: w~ = 0 and the minimal polynomial is padded to degree s.
    const std::size_t d = basis.dimension();
    result.poly = polynomial_from_coordinates(a, v, basis, d).shifted(s - d);
    result.w_tilde = Vector(a.size());
    result.norm = 0.0;
    return result;
  }

  // A^s v = (prod_j h_{j+1,j}) q_s + (component in K_s), so the projection is
  // the last orthogonalized vector scaled by the earlier subdiagonal entries.
  double scale = 1.0;
  for (std::size_t j = 0; j + 1 < s; ++j) scale *= basis.hessenberg[j][j + 1];
  result.w_tilde = basis.residual * scale;
  result.norm = norm(result.w_tilde);
  result.w = result.w_tilde / result.norm;
  result.poly = polynomial_from_coordinates(a, v, basis, s);
  return result;
}

Vector evaluate_monic(const MonicPolynomial& poly, const Matrix& a, const Vector& v) {
  if (a.size() != v.size()) {
    throw Error(ErrorKind::invalid_argument, "evaluate_monic: dimension mismatch");
  }
  const auto& c = poly.low_coeffs();
  Vector acc = v;
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = matvec(a, acc);
    axpy(c[i], v, acc);
  }
  return acc;
}

MonicPolynomial hessenberg_polynomial(const KrylovBasis& basis, std::size_t s) {
  if (s == 0 || s > basis.hessenberg.size()) {
    throw Error(ErrorKind::invalid_argument, "hessenberg_polynomial: degree out of range");
  }
  // H(i, j) for the leading s x s block.
  auto h = [&](std::size_t i, std::size_t j) { return basis.hessenberg[j][i]; };

  std::vector<Coeffs> p;
  p.push_back(Coeffs{1.0});
  for (std::size_t k = 1; k <= s; ++k) {
    const std::size_t col = k - 1;
    Coeffs next = multiply(p[k - 1], Coeffs{-h(col, col), 1.0});
    double sub_product = 1.0;
    for (std::size_t i = k - 1; i-- > 0;) {
      // Row i of the last column, weighted by the subdiagonal chain below it.
      sub_product *= h(i + 1, i);
      const double coeff = h(i, col) * sub_product;
      for (std::size_t m = 0; m < p[i].size(); ++m) next[m] -= coeff * p[i][m];
    }
    p.push_back(std::move(next));
  }
  return from_full(p[s]);
}

double spectral_norm(const Matrix& a, const SpectralNormOptions& options) {
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  // Cyclic Jacobi on the Gram matrix; exact enough even when the top
  // singular values coincide, where power iteration stalls.
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += a(r, i) * a(r, j);
      g[i][j] = g[j][i] = acc;
    }

  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += g[i][i] * g[i][i];
      for (std::size_t j = i + 1; j < n; ++j) off += g[i][j] * g[i][j];
    }
    if (off <= 1e-32 * diag || off == 0.0) {
      double top = 0.0;
      for (std::size_t i = 0; i < n; ++i) top = std::max(top, g[i][i]);
      return std::sqrt(top);
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (g[p][q] == 0.0) continue;
        const double theta = (g[q][q] - g[p][p]) / (2.0 * g[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double gkp = g[k][p], gkq = g[k][q];
          g[k][p] = c * gkp - sn * gkq;
          g[k][q] = sn * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double gpk = g[p][k], gqk = g[q][k];
          g[p][k] = c * gpk - sn * gqk;
          g[q][k] = sn * gpk + c * gqk;
        }
      }
  }
  throw Error(ErrorKind::breakdown, "spectral_norm: Jacobi sweeps did not converge after " +
                                        std::to_string(options.max_sweeps) + " sweeps");
}

IdealArnoldiS1 ideal_arnoldi_s1(const Matrix& a, const IdealArnoldiOptions& options) {
  const std::size_t n = a.size();
  if (n == 0) throw Error(ErrorKind::invalid_argument, "ideal_arnoldi_s1: empty matrix");
  const double radius = std::max(1.0, a.max_abs()) * static_cast<double>(n);

  auto objective = [&](double alpha) {
    Matrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= alpha;
    return spectral_norm(shifted, options.spectral);
  };
  const double alpha = golden_section(objective, -radius, radius, options.bracket_width);
  return {alpha, objective(alpha)};
}

IdealArnoldiS1 ideal_arnoldi_s1_normal(std::span<const std::complex<double>> eigenvalues) {
  if (eigenvalues.empty()) {
    throw Error(ErrorKind::invalid_argument, "ideal_arnoldi_s1_normal: no eigenvalues");
  }
  // f(alpha)^2 = max_j (a_j - alpha)^2 + b_j^2 is a maximum of parabolas; its
  // minimizer is a vertex a_j or an intersection of two parabolas.
  auto squared = [&](double alpha) {
    double m = 0.0;
    for (const auto& z : eigenvalues) m = std::max(m, std::norm(z - alpha));
    return m;
  };
  std::vector<double> candidates;
  for (const auto& z : eigenvalues) candidates.push_back(z.real());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      const double ai = eigenvalues[i].real();
      const double aj = eigenvalues[j].real();
      if (ai == aj) continue;
      candidates.push_back((std::norm(eigenvalues[i]) - std::norm(eigenvalues[j])) /
                           (2.0 * (ai - aj)));
    }
  }
  IdealArnoldiS1 best{candidates.front(), squared(candidates.front())};
  for (double c : candidates) {
    const double f = squared(c);
    if (f < best.value) best = {c, f};
  }
  best.value = std::sqrt(best.value);
  return best;
}

Vector polish_worst_case(const Matrix& a, std::size_t s, Vector v, std::size_t iterations,
                         double grade_tol) {
  const Matrix at = a.transpose();
  auto value = [&](const Vector& x) { return arnoldi_projection(a, x, s, grade_tol).norm; };

  double step = 1.0;
  ProjectionResult current = arnoldi_projection(a, v, s, grade_tol);
  for (std::size_t it = 0; it < iterations && current.norm > 0.0; ++it) {
    // Gradient of |P(A; v) v|^2 at fixed optimal P: 2 P(A^T) P(A) v.
    Vector g = evaluate_monic(current.poly, at, current.w_tilde) * 2.0;
    axpy(-dot(v, g), v, g);
    const double gnorm = norm(g);
    const double f0 = current.norm * current.norm;
    if (gnorm <= 1e-15 * std::max(1.0, f0)) break;

    bool accepted = false;
    step = std::min(step * 2.0, 1.0 / gnorm);
    while (step * gnorm > 1e-16) {
      Vector trial = v;
      axpy(step, g, trial);
      trial = normalized(trial);
      const double f1 = value(trial);
      if (f1 * f1 >= f0 + 1e-4 * step * gnorm * gnorm) {
        v = std::move(trial);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    current = arnoldi_projection(a, v, s, grade_tol);
  }
  return v;
}

WorstCaseEstimate worst_case_arnoldi_estimate(const Matrix& a, std::size_t s,
                                              std::size_t n_starts, std::uint64_t seed,
                                              const WorstCaseOptions& options) {
  const std::size_t n = a.size();
  if (s == 0) throw Error(ErrorKind::invalid_argument, "restart length must be positive");
  if (n_starts == 0) {
    throw Error(ErrorKind::invalid_argument, "worst_case_arnoldi_estimate: n_starts must be >= 1");
  }
  {
    // A generic vector attains the degree of the minimal polynomial d(A).
    std::mt19937_64 gen = start_generator(seed, static_cast<std::size_t>(-1));
    const std::size_t degree = grade(a, gaussian_vector(n, gen), options.grade_tol);
    if (s >= degree) {
      throw Error(ErrorKind::precondition,
                  "worst-case Arnoldi requires 1 <= s < d(A); d(A) = " +
                      std::to_string(degree) + ", s = " + std::to_string(s));
    }
  }

  IterationConfig cfg;
  cfg.max_steps = options.aci_max_steps;
  cfg.diff_tol = options.aci_diff_tol;

  WorstCaseEstimate best;
  bool have_best = false;
  for (std::size_t start = 0; start < n_starts; ++start) {
    std::mt19937_64 gen = start_generator(seed, start);
    Vector v0;
    for (int attempt = 0; attempt < 100; ++attempt) {
      v0 = normalized(gaussian_vector(n, gen));
      if (grade(a, v0, options.grade_tol) >= s + 1) break;
      v0 = Vector();
    }
    if (v0.empty()) continue;

    Vector limit;
    double tau = 0.0;
    try {
      const IterationTrace trace = aci_run(a, s, v0, cfg, options.grade_tol);
      limit = trace.final_v;
      tau = trace.records.back().norm_w_tilde;
    } catch (const BreakdownError&) {
      continue;
    }

    Vector candidate = limit;
    double value = tau;
    const Vector polished =
        polish_worst_case(a, s, limit, options.polish_iterations, options.grade_tol);
    const double polished_value = arnoldi_projection(a, polished, s, options.grade_tol).norm;
    if (polished_value > value) {
      value = polished_value;
      candidate = polished;
    } else {
      value = std::max(value, arnoldi_projection(a, limit, s, options.grade_tol).norm);
    }

    if (!have_best || value > best.phi_hat) {
      best = {value, candidate, start};
      have_best = true;
    }
  }
  if (!have_best) {
    throw Error(ErrorKind::breakdown, "worst_case_arnoldi_estimate: every start failed");
  }
  return best;
}

}  // namespace aci
