#include "aci/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "aci/error.hpp"

namespace aci {

const char* to_string(SpectrumKind kind) noexcept {
  switch (kind) {
    case SpectrumKind::symmetric:
      return "symmetric";
    case SpectrumKind::orthogonal:
      return "orthogonal";
    case SpectrumKind::spd:
      return "spd";
  }
  return "unknown";
}

SpectrumKind spectrum_kind_from_string(const std::string& name) {
  for (SpectrumKind k : {SpectrumKind::symmetric, SpectrumKind::orthogonal, SpectrumKind::spd}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::invalid_argument, "unknown spectrum kind '" + name + "'");
}

double RotationBlock::sine() const {
  return static_cast<double>(sign) * std::sqrt(1.0 - c * c);
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, "invalid spectrum spec: " + what);
}

}  // namespace

void SpectrumSpec::validate() const {
  switch (kind) {
    case SpectrumKind::symmetric:
    case SpectrumKind::spd: {
      if (eigenvalues.empty()) invalid("eigenvalues must be nonempty");
      if (!rotation_blocks.empty() || has_plus_one || has_minus_one) {
        invalid("rotation blocks and +-1 blocks are only allowed for orthogonal specs");
      }
      for (double x : eigenvalues) {
        if (!std::isfinite(x)) invalid("eigenvalues must be finite");
        if (kind == SpectrumKind::spd && !(x > 0.0)) invalid("spd eigenvalues must be > 0");
      }
      if (distinct_required) {
        std::set<double> seen(eigenvalues.begin(), eigenvalues.end());
        if (seen.size() != eigenvalues.size()) invalid("eigenvalues must be pairwise distinct");
      }
      break;
    }
    case SpectrumKind::orthogonal: {
      if (!eigenvalues.empty()) invalid("orthogonal specs take rotation_blocks, not eigenvalues");
      if (rotation_blocks.empty() && !has_plus_one && !has_minus_one) {
        invalid("orthogonal spec has no blocks");
      }
      std::set<double> seen;
      for (const auto& b : rotation_blocks) {
        if (!std::isfinite(b.c) || !(std::abs(b.c) < 1.0)) {
          invalid("rotation block cosine must satisfy |c| < 1");
        }
        if (b.sign != 1 && b.sign != -1) invalid("rotation block sign must be +1 or -1");
        if (!seen.insert(b.c).second) invalid("rotation block cosines must be pairwise distinct");
      }
      break;
    }
  }
}

std::size_t SpectrumSpec::dimension() const {
  if (kind == SpectrumKind::orthogonal) {
    return 2 * rotation_blocks.size() + (has_plus_one ? 1 : 0) + (has_minus_one ? 1 : 0);
  }
  return eigenvalues.size();
}

std::size_t Eigendata::dimension() const {
  if (blocks.empty()) return 0;
  return blocks.back().offset + blocks.back().size;
}

Vector Eigendata::coordinates(const Vector& v) const {
  if (v.size() != dimension()) {
    throw Error(ErrorKind::invalid_argument, "coordinates: dimension mismatch");
  }
  return basis ? transpose_matvec(*basis, v) : v;
}

std::vector<double> Eigendata::block_norms(const Vector& v) const {
  const Vector nu = coordinates(v);
  std::vector<double> norms;
  norms.reserve(blocks.size());
  for (const auto& b : blocks) {
    Vector part(b.size);
    for (std::size_t i = 0; i < b.size; ++i) part[i] = nu[b.offset + i];
    norms.push_back(norm(part));
  }
  return norms;
}

std::vector<std::complex<double>> Eigendata::eigenvalues() const {
  std::vector<std::complex<double>> out;
  for (const auto& b : blocks) {
    if (b.size == 1) {
      out.emplace_back(b.re, 0.0);
    } else {
      out.emplace_back(b.re, b.im);
      out.emplace_back(b.re, -b.im);
    }
  }
  return out;
}

Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> cols;
  cols.reserve(n);
  while (cols.size() < n) {
    Vector c(n);
    for (double& x : c) x = normal(gen);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : cols) axpy(-dot(q, c), q, c);
    const double nc = norm(c);
    if (nc < 1e-8) continue;
    cols.push_back(c / nc);
  }
  return Matrix::from_columns(cols);
}

TestMatrix make_matrix(const SpectrumSpec& spec) {
  spec.validate();
  const std::size_t n = spec.dimension();
  TestMatrix out;
  out.eigendata.kind = spec.kind;
  Matrix g(n);

  std::size_t offset = 0;
  auto add_scalar = [&](double value) {
    g(offset, offset) = value;
    out.eigendata.blocks.push_back({offset, 1, value, 0.0});
    ++offset;
  };

  if (spec.kind == SpectrumKind::orthogonal) {
    if (spec.has_minus_one) add_scalar(-1.0);
    for (const auto& b : spec.rotation_blocks) {
      const double s = b.sine();
      g(offset, offset) = b.c;
      g(offset, offset + 1) = s;
      g(offset + 1, offset) = -s;
      g(offset + 1, offset + 1) = b.c;
      out.eigendata.blocks.push_back({offset, 2, b.c, std::abs(s)});
      offset += 2;
    }
    if (spec.has_plus_one) add_scalar(1.0);
  } else {
    for (double x : spec.eigenvalues) add_scalar(x);
  }

  if (spec.similarity_seed) {
    const Matrix u = random_orthogonal(n, *spec.similarity_seed);
    Matrix a = u * g * u.transpose();
    if (spec.kind != SpectrumKind::orthogonal) {
      // Restore exact symmetry lost to rounding in the triple product.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const double avg = 0.5 * (a(i, j) + a(j, i));
          a(i, j) = avg;
          a(j, i) = avg;
        }
    }
    out.a = std::move(a);
    out.eigendata.basis = u;
  } else {
    out.a = std::move(g);
  }

  if (spec.kind == SpectrumKind::orthogonal ? !out.a.is_orthogonal(1e-12)
                                            : !out.a.is_symmetric(1e-13)) {
    throw Error(ErrorKind::breakdown, "make_matrix: constructed matrix failed its structure check");
  }
  return out;
}

bool zero_in_fov(const SpectrumSpec& spec) {
  if (spec.kind != SpectrumKind::orthogonal) {
    throw Error(ErrorKind::invalid_argument, "zero_in_fov: requires an orthogonal spec");
  }
  std::vector<double> real_parts;
  for (const auto& b : spec.rotation_blocks) real_parts.push_back(b.c);
  if (spec.has_plus_one) real_parts.push_back(1.0);
  if (spec.has_minus_one) real_parts.push_back(-1.0);
  if (real_parts.empty()) invalid("orthogonal spec has no blocks");
  const bool all_positive =
      std::all_of(real_parts.begin(), real_parts.end(), [](double c) { return c > 0.0; });
  const bool all_negative =
      std::all_of(real_parts.begin(), real_parts.end(), [](double c) { return c < 0.0; });
  return !(all_positive || all_negative);
}

Vector random_unit_start(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "random_unit_start: n must be >= 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Vector v(n);
    for (double& x : v) x = normal(gen);
    const double nv = norm(v);
    if (nv > 0.0) return v / nv;
  }
}

Vector random_unit_start(const TestMatrix& matrix, std::uint64_t seed,
                         const StartConstraints& constraints) {
  const std::size_t n = matrix.a.size();
  if (constraints.min_grade > n) {
    throw Error(ErrorKind::precondition, "random_unit_start: min_grade exceeds dimension");
  }
  for (std::size_t b : constraints.nonzero_blocks) {
    if (b >= matrix.eigendata.blocks.size()) {
      throw Error(ErrorKind::invalid_argument, "random_unit_start: block index out of range");
    }
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector v(n);
    for (double& x : v) x = normal(gen);
    const double nv = norm(v);
    if (nv == 0.0) continue;
    v /= nv;
    if (!constraints.nonzero_blocks.empty()) {
      const auto norms = matrix.eigendata.block_norms(v);
      const bool ok = std::all_of(constraints.nonzero_blocks.begin(),
                                  constraints.nonzero_blocks.end(),
                                  [&](std::size_t b) { return norms[b] >= 0.01; });
      if (!ok) continue;
    }
    if (grade(matrix.a, v) < constraints.min_grade) continue;
    return v;
  }
  throw Error(ErrorKind::precondition,
              "random_unit_start: constraints unsatisfiable after 100 resamples");
}

}  // namespace aci
