// Frozen reference values. Each constant is first derived by hand (closed
// form), and the run-derived ones are cross-checked against an independent
// relation before being pinned.

#include <gtest/gtest.h>

#include <cmath>

#include "aci/diagnostics.hpp"
#include "test_support.hpp"

namespace {

using aci::Vector;

aci::TestMatrix symmetric(std::vector<double> eigenvalues) {
  aci::SpectrumSpec spec;
  spec.eigenvalues = std::move(eigenvalues);
  return aci::make_matrix(spec);
}

// |w~|^2 = sum v_i^2 l_i^2 - (sum v_i^2 l_i)^2 = 7 - (36/14)^2 = 76/196 for
// v0 = (1,2,3)/sqrt(14) on diag(1,2,3).
constexpr double kFirstNorm = 0.62269984907723908;

// Limit of the symmetric run from the same start: support {0, 2} with
// nu_1^2 = kNu2, tau^2 = 4 nu_1^2 (1 - nu_1^2).
constexpr double kLimitTau = 0.99493699033609972;
constexpr double kNu2 = 0.44974966353111678;

TEST(FrozenValues, ClosedFormsMatchPinnedConstants) {
  EXPECT_NEAR(kFirstNorm, std::sqrt(76.0) / 14.0, 1e-15);
  EXPECT_NEAR(kLimitTau * kLimitTau, 4.0 * kNu2 * (1.0 - kNu2), 1e-15);
}

TEST(FrozenValues, SymmetricThreeByThreeRun) {
  const auto tm = symmetric({1.0, 2.0, 3.0});
  aci::IterationConfig cfg;
  cfg.diff_tol = 1e-14;
  const auto trace = aci::aci_symmetric_run(tm.a, 1, aci::normalized(Vector{1.0, 2.0, 3.0}), cfg);
  ASSERT_EQ(trace.terminated_by, aci::Termination::diff_tol_reached);
  EXPECT_NEAR(trace.records.front().norm_w_tilde, kFirstNorm, 1e-15);
  const auto limit = aci::detect_limit(trace, tm.a, &tm.eigendata);
  EXPECT_NEAR(limit.tau, kLimitTau, 1e-13);
  EXPECT_NEAR(limit.limit_vector[0] * limit.limit_vector[0], kNu2, 1e-13);
  EXPECT_NEAR(limit.limit_vector[1], 0.0, 1e-13);
  EXPECT_EQ(limit.support, (std::vector<std::size_t>{0, 2}));
}

TEST(FrozenValues, TwoByTwoRayleighStep) {
  // alpha = 0.36 + 2 * 0.64 = 1.64, w~ = (-0.384, 0.288), |w~| = 0.48.
  const auto step =
      aci::aci1_rayleigh_step(aci::Matrix::diagonal(std::vector<double>{1.0, 2.0}), {0.6, 0.8});
  EXPECT_NEAR(step.rho, 1.64, 1e-15);
  EXPECT_NEAR(step.norm, 0.48, 1e-15);
  EXPECT_NEAR(step.v_next[0], -0.8, 1e-15);
  EXPECT_NEAR(step.v_next[1], 0.6, 1e-15);
}

TEST(FrozenValues, IdealArnoldiValues) {
  const auto d = aci::ideal_arnoldi_s1(aci::Matrix::diagonal(std::vector<double>{1.0, 2.0}));
  EXPECT_NEAR(d.alpha_star, 1.5, 1e-9);
  EXPECT_NEAR(d.value, 0.5, 1e-12);

  aci::SpectrumSpec spec;
  spec.kind = aci::SpectrumKind::orthogonal;
  spec.rotation_blocks = {{0.2, 1}, {0.5, 1}, {0.8, 1}};
  spec.has_plus_one = true;
  const auto tm = aci::make_matrix(spec);
  // sqrt(1 - 0.2^2) = sqrt(0.96)
  EXPECT_NEAR(aci::ideal_arnoldi_s1(tm.a).value, 0.97979589711327124, 1e-12);
}

TEST(FrozenValues, ContractionFactors) {
  aci::SpectrumSpec spec;
  spec.kind = aci::SpectrumKind::orthogonal;
  spec.rotation_blocks = {{0.2, 1}, {0.5, 1}, {0.8, 1}};
  spec.has_plus_one = true;
  const auto tm = aci::make_matrix(spec);
  aci::IterationConfig cfg;
  cfg.diff_tol = 1e-13;
  cfg.record_vectors = true;
  const auto trace =
      aci::aci1_orthogonal_run(tm.a, aci::random_unit_start(tm, 3, {2, {0}}), cfg);
  const auto rates = aci::estimate_contraction(trace, tm.eigendata);
  ASSERT_EQ(rates.blocks.size(), 3u);
  // (1 - 0.125)^2, (1 - 0.25)^2 and (0.8 / 1.2)^2.
  EXPECT_NEAR(rates.blocks[0].predicted_zeta, 0.765625, 1e-15);
  EXPECT_NEAR(rates.blocks[1].predicted_zeta, 0.5625, 1e-15);
  EXPECT_NEAR(rates.blocks[2].predicted_zeta, 4.0 / 9.0, 1e-15);
}

}  // namespace
