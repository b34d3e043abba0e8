#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aci/linalg.hpp"

namespace aci {

enum class SpectrumKind { symmetric, orthogonal, spd };

const char* to_string(SpectrumKind kind) noexcept;
SpectrumKind spectrum_kind_from_string(const std::string& name);

/// 2x2 block [[c, s], [-s, c]] with s = sign * sqrt(1 - c^2).
struct RotationBlock {
  double c = 0.0;
  int sign = +1;

  double sine() const;
  bool operator==(const RotationBlock&) const = default;
};

/// Declarative spectral structure of a test matrix.
struct SpectrumSpec {
  SpectrumKind kind = SpectrumKind::symmetric;
  std::vector<double> eigenvalues;            // symmetric / spd
  std::vector<RotationBlock> rotation_blocks;  // orthogonal
  bool has_plus_one = false;
  bool has_minus_one = false;
  std::optional<std::uint64_t> similarity_seed;
  bool distinct_required = true;

  /// Throws ErrorKind::invalid_argument describing the first violated invariant.
  void validate() const;
  std::size_t dimension() const;

  bool operator==(const SpectrumSpec&) const = default;
};

/// One diagonal block of the canonical form: a real eigenvalue (size 1,
/// value re) or a rotation block (size 2, eigenvalues re +- i im).
struct SpectralBlock {
  std::size_t offset = 0;
  std::size_t size = 1;
  double re = 0.0;
  double im = 0.0;
};

/// Exact eigenstructure of a generated matrix A = U G U^T.
struct Eigendata {
  SpectrumKind kind = SpectrumKind::symmetric;
  std::vector<SpectralBlock> blocks;
  /// U, absent when A is already in canonical form.
  std::optional<Matrix> basis;

  std::size_t dimension() const;
  /// Coordinates U^T v in the canonical basis.
  Vector coordinates(const Vector& v) const;
  /// Euclidean norm of each block of the coordinates.
  std::vector<double> block_norms(const Vector& v) const;
  std::vector<std::complex<double>> eigenvalues() const;
};

struct TestMatrix {
  Matrix a;
  Eigendata eigendata;
};

/// diag(lambda), diag([-1], G_1, ..., G_m, [+1]), or U G U^T with a seeded
/// random orthogonal U.
TestMatrix make_matrix(const SpectrumSpec& spec);

/// Whether 0 lies in the field of values (orthogonal specs only).
bool zero_in_fov(const SpectrumSpec& spec);

struct StartConstraints {
  std::size_t min_grade = 1;
  /// Block indices (into Eigendata::blocks) that must carry norm >= 0.01.
  std::vector<std::size_t> nonzero_blocks;
};

/// Seeded standard-normal unit vector.
Vector random_unit_start(std::size_t n, std::uint64_t seed);

/// Seeded unit start satisfying the block and grade constraints; resamples up
/// to 100 times before failing.
Vector random_unit_start(const TestMatrix& matrix, std::uint64_t seed,
                         const StartConstraints& constraints);

/// Seeded random orthogonal matrix (modified Gram-Schmidt on a Gaussian matrix).
Matrix random_orthogonal(std::size_t n, std::uint64_t seed);

/// JSON object mirroring the SpectrumSpec fields; see docs/schema.md.
std::string spectrum_to_json(const SpectrumSpec& spec);
SpectrumSpec spectrum_from_json(const std::string& text);

}  // namespace aci
