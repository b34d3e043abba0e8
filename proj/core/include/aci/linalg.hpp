#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace aci {

/// Default cutoff used when deciding that an orthogonalized Krylov vector is
/// numerically zero. The effective threshold is scaled by max(1, |A|_max).
inline constexpr double kDefaultGradeTol = 1e-10;

/// Dense real vector with finite entries.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0) : entries_(n, value) {}
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  static Vector unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator[](std::size_t i) { return entries_[i]; }
  double operator[](std::size_t i) const { return entries_[i]; }

  std::span<double> span() noexcept { return entries_; }
  std::span<const double> span() const noexcept { return entries_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  auto begin() noexcept { return entries_.begin(); }
  auto end() noexcept { return entries_.end(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double factor);
  Vector& operator/=(double divisor);

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> entries_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator*(double factor, Vector v);
Vector operator*(Vector v, double factor);
Vector operator/(Vector v, double divisor);

double dot(const Vector& x, const Vector& y);
double norm(const Vector& x);
double distance(const Vector& x, const Vector& y);
/// y += a * x
void axpy(double a, const Vector& x, Vector& y);
Vector normalized(const Vector& x);
bool all_finite(const Vector& x) noexcept;
double max_abs(const Vector& x) noexcept;

/// Dense square real matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double value = 0.0)
      : n_(n), entries_(n * n, value) {}
  Matrix(std::size_t n, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  /// Builds a matrix whose columns are the given vectors.
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * n_ + j];
  }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;
  std::span<const double> row_major() const noexcept { return entries_; }

  Matrix transpose() const;
  double max_abs() const noexcept;

  /// |A - A^T|_max <= tol
  bool is_symmetric(double tol = 1e-13) const;
  /// |A^T A - I|_max <= tol
  bool is_orthogonal(double tol = 1e-12) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double factor);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
bool all_finite(const Matrix& a) noexcept;

/// Ax. Throws ErrorKind::invalid_argument on dimension mismatch.
Vector matvec(const Matrix& a, const Vector& x);
/// A^T x without forming the transpose.
Vector transpose_matvec(const Matrix& a, const Vector& x);
/// x^T A y; nonnegative on the diagonal for SPD A.
double a_inner(const Matrix& a, const Vector& x, const Vector& y);

/// Orthonormal basis of K_m(A, v) from modified Gram-Schmidt with one
/// reorthogonalization pass.
///
/// hessenberg[j] holds the coefficients of A q_j in q_0..q_{j+1}; its last
/// entry is the norm of the orthogonalized vector. When the basis breaks down
/// at the grade, dimension() < m and the last hessenberg column ends with the
/// (sub-threshold) norm that triggered the stop.
struct KrylovBasis {
  std::vector<Vector> columns;
  std::vector<std::vector<double>> hessenberg;
  /// A q_{m-1} orthogonalized against all columns (unnormalized).
  Vector residual;
  /// True when the Krylov sequence stopped growing before m vectors.
  bool breakdown = false;

  std::size_t dimension() const noexcept { return columns.size(); }
};

/// Threshold below which an orthogonalized unit-scale Krylov vector counts as zero.
double grade_threshold(const Matrix& a, double tol);

KrylovBasis krylov_basis(const Matrix& a, const Vector& v, std::size_t m,
                         double tol = kDefaultGradeTol);

/// d(A, v): 0 for v = 0, otherwise the dimension of the Krylov space of v.
std::size_t grade(const Matrix& a, const Vector& v, double tol = kDefaultGradeTol);

/// Solves A x = b for symmetric positive definite A. Throws
/// ErrorKind::precondition when a nonpositive pivot shows A is not SPD.
Vector cholesky_solve(const Matrix& a, const Vector& b);

}  // namespace aci
