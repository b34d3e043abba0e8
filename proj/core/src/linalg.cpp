#include "aci/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aci/error.hpp"

namespace aci {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::invalid_argument,
                std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                    " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {}

Vector::Vector(std::initializer_list<double> entries) : entries_(entries) {}

Vector Vector::unit(std::size_t n, std::size_t i) {
  Vector e(n);
  e[i] = 1.0;
  return e;
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "vector addition");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "vector subtraction");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

Vector& Vector::operator*=(double factor) {
  for (double& x : entries_) x *= factor;
  return *this;
}

Vector& Vector::operator/=(double divisor) {
  for (double& x : entries_) x /= divisor;
  return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator*(double factor, Vector v) { return v *= factor; }
Vector operator*(Vector v, double factor) { return v *= factor; }
Vector operator/(Vector v, double divisor) { return v /= divisor; }

double dot(const Vector& x, const Vector& y) {
  require_same_size(x.size(), y.size(), "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

double norm(const Vector& x) {
  // Scaled accumulation keeps tiny block components (1e-200 and below) from
  // underflowing when squared.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double distance(const Vector& x, const Vector& y) {
  require_same_size(x.size(), y.size(), "distance");
  return norm(x - y);
}

void axpy(double a, const Vector& x, Vector& y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector normalized(const Vector& x) {
  const double nx = norm(x);
  if (nx == 0.0) {
    throw Error(ErrorKind::invalid_argument, "cannot normalize a zero vector");
  }
  return x / nx;
}

bool all_finite(const Vector& x) noexcept {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double max_abs(const Vector& x) noexcept {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Matrix::Matrix(std::size_t n, std::vector<double> row_major)
    : n_(n), entries_(std::move(row_major)) {
  if (entries_.size() != n * n) {
    throw Error(ErrorKind::invalid_argument,
                "matrix: expected " + std::to_string(n * n) + " entries, got " +
                    std::to_string(entries_.size()));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()) {
  entries_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw Error(ErrorKind::invalid_argument, "matrix: rows must form a square array");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix a(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) a(i, i) = diag[i];
  return a;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  const std::size_t n = columns.size();
  Matrix a(n);
  for (std::size_t j = 0; j < n; ++j) {
    require_same_size(columns[j].size(), n, "from_columns");
    for (std::size_t i = 0; i < n; ++i) a(i, j) = columns[j][i];
  }
  return a;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(std::vector<double>(entries_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                                    entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_)));
}

Vector Matrix::column(std::size_t j) const {
  Vector c(n_);
  for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

bool Matrix::is_orthogonal(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n_; ++k) sum += (*this)(k, i) * (*this)(k, j);
      if (std::abs(sum - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return true;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_size(n_, other.n_, "matrix addition");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_size(n_, other.n_, "matrix subtraction");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

Matrix& Matrix::operator*=(double factor) {
  for (double& v : entries_) v *= factor;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a.size(), b.size(), "matrix product");
  const std::size_t n = a.size();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

bool all_finite(const Matrix& a) noexcept {
  const auto e = a.row_major();
  return std::all_of(e.begin(), e.end(), [](double v) { return std::isfinite(v); });
}

Vector matvec(const Matrix& a, const Vector& x) {
  require_same_size(a.size(), x.size(), "matvec");
  const std::size_t n = a.size();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += a(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

Vector transpose_matvec(const Matrix& a, const Vector& x) {
  require_same_size(a.size(), x.size(), "transpose_matvec");
  const std::size_t n = a.size();
  Vector y(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a(i, j) * x[i];
    y[j] = sum;
  }
  return y;
}

double a_inner(const Matrix& a, const Vector& x, const Vector& y) {
  require_same_size(x.size(), y.size(), "a_inner");
  return dot(x, matvec(a, y));
}

double grade_threshold(const Matrix& a, double tol) {
  return tol * std::max(1.0, a.max_abs());
}

KrylovBasis krylov_basis(const Matrix& a, const Vector& v, std::size_t m, double tol) {
  require_same_size(a.size(), v.size(), "krylov_basis");
  const double nv = norm(v);
  if (nv == 0.0) throw Error(ErrorKind::invalid_argument, "zero start vector");
  if (m == 0) throw Error(ErrorKind::invalid_argument, "krylov_basis: m must be positive");
  m = std::min(m, a.size());

  const double threshold = grade_threshold(a, tol);
  KrylovBasis basis;
  basis.columns.reserve(m);
  basis.columns.push_back(v / nv);

  for (std::size_t j = 0;; ++j) {
    Vector u = matvec(a, basis.columns[j]);
    std::vector<double> h(j + 2, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= j; ++i) {
        const double c = dot(basis.columns[i], u);
        h[i] += c;
        axpy(-c, basis.columns[i], u);
      }
    }
    const double beta = norm(u);
    h[j + 1] = beta;
    basis.hessenberg.push_back(std::move(h));

    if (beta <= threshold) {
      basis.breakdown = true;
      basis.residual = std::move(u);
      break;
    }
    if (j + 1 == m) {
      basis.residual = std::move(u);
      break;
    }
    basis.columns.push_back(u / beta);
  }
  return basis;
}

std::size_t grade(const Matrix& a, const Vector& v, double tol) {
  if (norm(v) == 0.0) return 0;
  return krylov_basis(a, v, a.size(), tol).dimension();
}

Vector cholesky_solve(const Matrix& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "cholesky_solve");
  const std::size_t n = a.size();
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      throw Error(ErrorKind::precondition, "matrix is not symmetric positive definite");
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

}  // namespace aci
