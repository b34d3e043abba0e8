#include <gtest/gtest.h>

#include <cmath>

#include "aci/diagnostics.hpp"
#include "test_support.hpp"

namespace {

using aci::ErrorKind;
using aci::IterationConfig;
using aci::IterationTrace;
using aci::Matrix;
using aci::Vector;
using aci::testing::throws_kind;

IterationConfig config(std::size_t max_steps, double diff_tol, bool record = false) {
  IterationConfig cfg;
  cfg.max_steps = max_steps;
  cfg.diff_tol = diff_tol;
  cfg.record_vectors = record;
  return cfg;
}

aci::TestMatrix symmetric(std::vector<double> eigenvalues) {
  aci::SpectrumSpec spec;
  spec.eigenvalues = std::move(eigenvalues);
  return aci::make_matrix(spec);
}

aci::TestMatrix orthogonal(std::vector<aci::RotationBlock> blocks, bool plus_one = false) {
  aci::SpectrumSpec spec;
  spec.kind = aci::SpectrumKind::orthogonal;
  spec.rotation_blocks = std::move(blocks);
  spec.has_plus_one = plus_one;
  return aci::make_matrix(spec);
}

IterationTrace norms_trace(std::vector<std::pair<double, double>> norms) {
  IterationTrace trace;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    aci::AciStepRecord r;
    r.k = k;
    r.norm_w_tilde = norms[k].first;
    r.norm_v_tilde = norms[k].second;
    trace.records.push_back(r);
  }
  return trace;
}

/// Limit report for diag(1, 2) at the fixed point (1, 1) / sqrt(2).
aci::LimitReport two_by_two_limit() {
  aci::LimitReport report;
  report.limit_vector = aci::normalized(Vector{1.0, 1.0});
  report.coordinates = report.limit_vector;
  report.support = {0, 1};
  report.tau = 0.5;
  report.poly_v = aci::MonicPolynomial({-1.5});
  report.poly_w = aci::MonicPolynomial({-1.5});
  return report;
}

TEST(CheckInterlacing, ConvergedRunHasNoViolations) {
  const Matrix a = aci::testing::random_matrix(6, 9);
  const auto trace = aci::aci_run(a, 2, aci::testing::random_unit(6, 10), config(500, 1e-15));
  EXPECT_TRUE(aci::check_interlacing(trace).confirmed());
}

TEST(CheckInterlacing, HandBuiltDecreaseIsFlagged) {
  const auto check = aci::check_interlacing(norms_trace({{0.5, 0.4}}));
  ASSERT_EQ(check.violations.size(), 1u);
  EXPECT_EQ(check.violations.front(), 1u);
}

TEST(CheckInterlacing, ConstantNormsAreStationary) {
  const auto check = aci::check_interlacing(norms_trace({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}}));
  EXPECT_TRUE(check.confirmed());
  EXPECT_EQ(check.stationary.size(), 5u);
}

TEST(DetectLimit, SymmetricSOneLimitHasGradeTwo) {
  const auto tm = symmetric({1.0, 2.0, 3.0, 4.0});
  const Vector v0 = aci::random_unit_start(tm, 3, {2, {}});
  const auto trace = aci::aci_symmetric_run(tm.a, 1, v0, config(100000, 1e-12));
  const auto report = aci::detect_limit(trace, tm.a, &tm.eigendata);
  EXPECT_EQ(report.limit_grade, 2u);
  EXPECT_EQ(report.support.size(), 2u);
  EXPECT_EQ(report.subsequence, aci::Subsequence::even);
  ASSERT_TRUE(report.tau_relation_residual.has_value());
  EXPECT_LE(*report.tau_relation_residual, 1e-8);
  EXPECT_LE(report.fixed_point_residual, 10 * 1e-12);
}

TEST(DetectLimit, OrthogonalLimitSitsInFirstBlock) {
  const auto tm = orthogonal({{0.2, 1}, {0.8, 1}});
  const Vector v0 = aci::random_unit_start(tm, 4, {2, {0}});
  const auto trace = aci::aci1_orthogonal_run(tm.a, v0, config(100000, 1e-13));
  const auto report = aci::detect_limit(trace, tm.a, &tm.eigendata);
  ASSERT_EQ(report.support.size(), 1u);
  EXPECT_EQ(report.support.front(), 0u);
  ASSERT_TRUE(report.rayleigh_limit.has_value());
  EXPECT_NEAR(*report.rayleigh_limit, 0.2, 1e-8);
  EXPECT_FALSE(report.q_interpolation_residuals.has_value());
}

TEST(DetectLimit, FixedPointResidualBoundedByDiffTol) {
  const Matrix a = aci::testing::random_matrix(6, 71);
  for (double tol : {1e-8, 1e-10, 1e-12}) {
    const auto trace = aci::aci_run(a, 1, aci::testing::random_unit(6, 72), config(100000, tol));
    ASSERT_EQ(trace.terminated_by, aci::Termination::diff_tol_reached);
    const auto report = aci::detect_limit(trace, a);
    EXPECT_LE(report.fixed_point_residual, 10 * tol);
    EXPECT_FALSE(report.coordinates.has_value());
    EXPECT_GE(report.limit_grade, 2u);
  }
}

TEST(DetectLimit, UnconvergedTraceHasNoLimit) {
  const auto tm = symmetric({1.0, 2.0, 3.0});
  const auto trace =
      aci::aci_symmetric_run(tm.a, 1, aci::normalized(Vector{1.0, 2.0, 3.0}), config(2, 1e-12));
  EXPECT_TRUE(throws_kind([&] { aci::detect_limit(trace, tm.a, &tm.eigendata); },
                          ErrorKind::not_converged, "no limit detected"));
}

TEST(VerifyTauRelation, TwoByTwoFixedPointIsExact) {
  const auto tm = symmetric({1.0, 2.0});
  EXPECT_NEAR(aci::verify_tau_relation(two_by_two_limit(), tm.eigendata), 0.0, 1e-15);
}

TEST(VerifyTauRelation, ConvergedThreeByThreeRun) {
  const auto tm = symmetric({1.0, 2.0, 3.0});
  const auto trace = aci::aci_symmetric_run(tm.a, 1, aci::normalized(Vector{1.0, 1.0, 1.0}),
                                            config(100000, 1e-12));
  const auto report = aci::detect_limit(trace, tm.a, &tm.eigendata);
  EXPECT_LE(aci::verify_tau_relation(report, tm.eigendata), 1e-8);
}

TEST(VerifyTauRelation, PerturbedTauShowsUp) {
  const auto tm = symmetric({1.0, 2.0});
  auto report = two_by_two_limit();
  report.tau += 0.1;
  EXPECT_NEAR(aci::verify_tau_relation(report, tm.eigendata), 0.1 * (2 * 0.5 + 0.1), 1e-14);
}

TEST(VerifyTauRelation, NeedsTwoPointSupport) {
  const auto tm = symmetric({1.0, 2.0});
  auto report = two_by_two_limit();
  report.support = {0};
  EXPECT_TRUE(throws_kind([&] { aci::verify_tau_relation(report, tm.eigendata); },
                          ErrorKind::precondition));
}

TEST(VerifyQInterpolation, TwoByTwoFixedPoint) {
  const auto tm = symmetric({1.0, 2.0});
  const auto res = aci::verify_q_interpolation(two_by_two_limit(), tm.eigendata, 1);
  ASSERT_EQ(res.size(), 2u);
  for (double r : res) EXPECT_NEAR(r, 0.0, 1e-15);
}

TEST(VerifyQInterpolation, SOfTwoSupportLimit) {
  const auto tm = symmetric({1.0, 2.0, 3.0, 4.0, 5.0});
  const auto trace = aci::aci_symmetric_run(tm.a, 2, aci::random_unit_start(tm, 12, {3, {}}),
                                            config(100000, 1e-12));
  const auto report = aci::detect_limit(trace, tm.a, &tm.eigendata);
  ASSERT_TRUE(report.q_interpolation_residuals.has_value());
  EXPECT_LE(report.support.size(), 4u);
  for (double r : *report.q_interpolation_residuals) EXPECT_LE(r, 1e-8);
}

TEST(VerifyQInterpolation, RejectsNonSymmetric) {
  const auto tm = orthogonal({{0.2, 1}});
  aci::LimitReport report;
  report.poly_v = aci::MonicPolynomial({0.0});
  report.poly_w = aci::MonicPolynomial({0.0});
  EXPECT_TRUE(throws_kind([&] { aci::verify_q_interpolation(report, tm.eigendata, 1); },
                          ErrorKind::invalid_argument));
}

TEST(EstimateContraction, PredictedFactorsForTwoBlocks) {
  const auto tm = orthogonal({{0.2, 1}, {0.8, 1}}, true);
  const Vector v0 = aci::random_unit_start(tm, 5, {2, {0}});
  const auto trace = aci::aci1_orthogonal_run(tm.a, v0, config(100000, 1e-13, true));
  const auto rates = aci::estimate_contraction(trace, tm.eigendata);
  ASSERT_EQ(rates.blocks.size(), 2u);
  EXPECT_NEAR(rates.blocks[0].predicted_zeta, 0.5625, 1e-15);
  EXPECT_NEAR(rates.blocks[1].predicted_zeta, 4.0 / 9.0, 1e-15);
  for (const auto& b : rates.blocks) {
    EXPECT_NEAR(b.empirical_zeta / b.predicted_zeta, 1.0, 0.05) << "block " << b.block;
  }
  EXPECT_EQ(rates.transient_cutoff, trace.records.size() / 2);
}

TEST(EstimateContraction, SingleBlockIsEmpty) {
  const auto tm = orthogonal({{0.4, 1}});
  const auto trace = aci::aci1_orthogonal_run(tm.a, aci::testing::random_unit(2, 1),
                                              config(10, 1e-12, true));
  EXPECT_TRUE(aci::estimate_contraction(trace, tm.eigendata).blocks.empty());
}

TEST(EstimateContraction, NeedsRecordedVectors) {
  const auto tm = orthogonal({{0.2, 1}, {0.8, 1}});
  const auto trace = aci::aci1_orthogonal_run(tm.a, aci::testing::random_unit(4, 2),
                                              config(10, 1e-12));
  EXPECT_TRUE(throws_kind([&] { aci::estimate_contraction(trace, tm.eigendata); },
                          ErrorKind::invalid_argument, "not recorded"));
}

TEST(CheckZeroFov, FixedPointExampleIsExactlyZero) {
  const auto tm = orthogonal({{-0.6, 1}, {0.6, 1}});
  const Vector v0 = aci::normalized(Vector{1.0, 0.0, 1.0, 0.0});
  const auto trace = aci::aci1_orthogonal_run(tm.a, v0, config(100, 1e-300));
  const auto z = aci::check_zero_fov_case(trace, tm.eigendata);
  EXPECT_LE(std::abs(z.alpha_limit), 1e-15);
  EXPECT_LE(std::abs(z.beta_limit), 1e-15);
}

TEST(CheckZeroFov, MixedSignBlocksDriveQuotientsToZero) {
  const auto tm = orthogonal({{-0.3, 1}, {0.5, 1}});
  const Vector v0 = aci::random_unit_start(tm, 8, {2, {0, 1}});
  const auto trace = aci::aci1_orthogonal_run(tm.a, v0, config(10000, 1e-300));
  const auto z = aci::check_zero_fov_case(trace, tm.eigendata);
  EXPECT_LE(std::abs(z.alpha_limit), 1e-6);
  EXPECT_LE(std::abs(z.beta_limit), 1e-6);
}

TEST(CheckZeroFov, PositiveSpectrumFailsHypotheses) {
  const auto tm = orthogonal({{0.2, 1}, {0.8, 1}});
  const auto trace = aci::aci1_orthogonal_run(tm.a, aci::testing::random_unit(4, 3),
                                              config(10, 1e-12));
  EXPECT_TRUE(throws_kind([&] { aci::check_zero_fov_case(trace, tm.eigendata); },
                          ErrorKind::precondition, "hypotheses unmet"));
}

}  // namespace
