#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "aci/error.hpp"
#include "aci/linalg.hpp"

namespace aci::testing {

/// Runs fn and checks that it throws aci::Error of the given kind whose
/// message contains `fragment`.
template <typename Fn>
::testing::AssertionResult throws_kind(Fn&& fn, ErrorKind kind, const std::string& fragment = "") {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() != kind) {
      return ::testing::AssertionFailure()
             << "wrong kind " << to_string(e.kind()) << ": " << e.what();
    }
    if (std::string(e.what()).find(fragment) == std::string::npos) {
      return ::testing::AssertionFailure() << "message '" << e.what() << "' lacks '" << fragment
                                           << "'";
    }
    return ::testing::AssertionSuccess();
  }
  return ::testing::AssertionFailure() << "no exception";
}

inline double max_diff(const Vector& x, const Vector& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

/// Entries N(0, 1) / sqrt(n).
inline Matrix random_matrix(std::size_t n, std::uint64_t seed, bool symmetric = false) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = normal(gen);
  if (symmetric) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) a(j, i) = a(i, j);
  }
  return a;
}

inline Vector random_unit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (double& x : v) x = normal(gen);
  return normalized(v);
}

}  // namespace aci::testing
