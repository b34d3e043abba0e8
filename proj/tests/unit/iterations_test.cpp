#include <gtest/gtest.h>

#include <cmath>

#include "aci/generators.hpp"
#include "aci/iterations.hpp"
#include "test_support.hpp"

namespace {

using aci::Algorithm;
using aci::ErrorKind;
using aci::IterationConfig;
using aci::Matrix;
using aci::Termination;
using aci::Vector;
using aci::testing::max_diff;
using aci::testing::throws_kind;

Matrix diag(std::initializer_list<double> d) {
  const std::vector<double> v(d);
  return Matrix::diagonal(v);
}

IterationConfig config(std::size_t max_steps, double diff_tol, bool record = false) {
  IterationConfig cfg;
  cfg.max_steps = max_steps;
  cfg.diff_tol = diff_tol;
  cfg.record_vectors = record;
  return cfg;
}

aci::TestMatrix orthogonal(std::vector<aci::RotationBlock> blocks, bool plus_one = false) {
  aci::SpectrumSpec spec;
  spec.kind = aci::SpectrumKind::orthogonal;
  spec.rotation_blocks = std::move(blocks);
  spec.has_plus_one = plus_one;
  return aci::make_matrix(spec);
}

TEST(IterationConfig, Validates) {
  EXPECT_TRUE(throws_kind([] { config(0, 1e-12).validate(); }, ErrorKind::invalid_argument));
  EXPECT_TRUE(throws_kind([] { config(10, 0.0).validate(); }, ErrorKind::invalid_argument));
  EXPECT_NO_THROW(config(1, 1e-3).validate());
}

TEST(Names, RoundTrip) {
  for (Algorithm a : {Algorithm::aci, Algorithm::aci_symmetric, Algorithm::aci1_orthogonal,
                      Algorithm::cg}) {
    EXPECT_EQ(aci::algorithm_from_string(aci::to_string(a)), a);
  }
  EXPECT_TRUE(throws_kind([] { aci::algorithm_from_string("gmres"); }, ErrorKind::invalid_argument));
}

TEST(AciRun, SymmetricTraceMatchesSymmetricDriver) {
  const Matrix a = aci::testing::random_matrix(6, 31, true);
  const Vector v0 = aci::testing::random_unit(6, 32);
  const auto cfg = config(40, 1e-300, true);
  const auto full = aci::aci_run(a, 2, v0, cfg);
  const auto sym = aci::aci_symmetric_run(a, 2, v0, cfg);
  ASSERT_EQ(full.records.size(), sym.records.size());
  for (std::size_t k = 0; k < full.records.size(); ++k) {
    const auto& f = full.records[k];
    const auto& s = sym.records[k];
    EXPECT_NEAR(f.norm_w_tilde, s.norm_w_tilde, 1e-12) << k;
    EXPECT_NEAR(f.norm_v_tilde, s.norm_v_tilde, 1e-12) << k;
    EXPECT_NEAR(f.diff_v, s.diff_v, 1e-10) << k;
    EXPECT_LE(max_diff(*f.v, *s.v), 1e-10) << k;
    EXPECT_LE(max_diff(*f.w, *s.w), 1e-10) << k;
  }
}

TEST(AciRun, FixedPointExampleStaysPut) {
  const auto tm = orthogonal({{-0.6, 1}, {0.6, 1}});
  const Vector v0 = aci::normalized(Vector{1.0, 0.0, 1.0, 0.0});
  const auto trace = aci::aci_run(tm.a, 1, v0, config(50, 1e-300, true));
  EXPECT_EQ(trace.terminated_by, Termination::diff_tol_reached);
  EXPECT_LE(max_diff(trace.final_v, v0), 1e-14);
  for (const auto& r : trace.records) {
    EXPECT_LE(max_diff(*r.v, v0), 1e-14);
    EXPECT_NEAR(r.norm_w_tilde, 1.0, 1e-14);
  }
}

TEST(AciRun, MergedNormsNondecrease) {
  const Matrix a = aci::testing::random_matrix(7, 41);
  const auto trace = aci::aci_run(a, 2, aci::testing::random_unit(7, 42), config(300, 1e-14));
  double prev = 0.0;
  for (const auto& r : trace.records) {
    EXPECT_GE(r.norm_w_tilde, prev - 1e-12);
    EXPECT_GE(r.norm_v_tilde, r.norm_w_tilde - 1e-12);
    prev = r.norm_v_tilde;
  }
}

TEST(AciRun, StartGradeTooSmall) {
  EXPECT_TRUE(throws_kind(
      [] {
        aci::aci_run(diag({1.0, 2.0, 3.0}), 2, aci::normalized(Vector{1.0, 1.0, 0.0}),
                     config(10, 1e-12));
      },
      ErrorKind::precondition, "start grade too small"));
}

TEST(AciRun, RecordsRayleighQuotientsForSOne) {
  const Matrix a = aci::testing::random_matrix(5, 51);
  const Vector v0 = aci::testing::random_unit(5, 52);
  const auto trace = aci::aci_run(a, 1, v0, config(3, 1e-12, true));
  const auto& r = trace.records.front();
  EXPECT_NEAR(r.alpha, aci::a_inner(a, *r.v, *r.v), 1e-14);
  EXPECT_NEAR(r.beta, aci::a_inner(a, *r.w, *r.w), 1e-14);
  const auto s2 = aci::aci_run(a, 2, v0, config(3, 1e-12));
  EXPECT_TRUE(std::isnan(s2.records.front().alpha));
}

TEST(AciRun, TerminationReasons) {
  const Matrix a = diag({1.0, 2.0, 3.0});
  const Vector v0 = aci::normalized(Vector{1.0, 2.0, 3.0});
  EXPECT_EQ(aci::aci_run(a, 1, v0, config(3, 1e-12)).terminated_by, Termination::max_steps);
  const auto done = aci::aci_run(a, 1, v0, config(100000, 1e-12));
  EXPECT_EQ(done.terminated_by, Termination::diff_tol_reached);
  EXPECT_LT(done.records.back().diff_v, 1e-12);
  EXPECT_EQ(done.tau_estimate, done.records.back().norm_v_tilde);
}

TEST(AciSymmetricRun, CollinearWhenGradeIsSPlusOne) {
  for (std::size_t s = 1; s <= 3; ++s) {
    std::vector<double> d;
    for (std::size_t i = 1; i <= s + 1; ++i) d.push_back(static_cast<double>(i));
    const Matrix a = Matrix::diagonal(d);
    const Vector v0 = aci::testing::random_unit(s + 1, 60 + s);
    const auto trace = aci::aci_symmetric_run(a, s, v0, config(20, 1e-300, true));
    for (const auto& r : trace.records) EXPECT_LE(aci::distance(*r.v, v0), 1e-10) << "s=" << s;
  }
}

TEST(AciSymmetricRun, TwoByTwoEvenIterateReturns) {
  const auto trace =
      aci::aci_symmetric_run(diag({1.0, 2.0}), 1, Vector{0.6, 0.8}, config(5, 1e-12, true));
  EXPECT_EQ(trace.terminated_by, Termination::diff_tol_reached);
  EXPECT_EQ(trace.records.size(), 1u);
  EXPECT_LE(max_diff(trace.final_v, Vector{0.6, 0.8}), 1e-12);
}

TEST(AciSymmetricRun, LimitHasTwoEigencomponents) {
  const Vector v0 = aci::normalized(Vector{1.0, 1.0, 1.0});
  const auto trace = aci::aci_symmetric_run(diag({1.0, 2.0, 3.0}), 1, v0, config(100000, 1e-12));
  ASSERT_EQ(trace.terminated_by, Termination::diff_tol_reached);
  int support = 0;
  for (double x : trace.final_v) support += std::abs(x) > 1e-8;
  EXPECT_EQ(support, 2);
}

TEST(AciSymmetricRun, RejectsNonSymmetric) {
  const Matrix a{{1.0, 2.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}};
  EXPECT_TRUE(throws_kind(
      [&] { aci::aci_symmetric_run(a, 1, aci::normalized(Vector{1.0, 1.0, 1.0}), config(5, 1e-12)); },
      ErrorKind::invalid_argument));
}

TEST(Aci1RayleighStep, DiagonalExample) {
  const auto r = aci::aci1_rayleigh_step(diag({1.0, 2.0}), aci::normalized(Vector{1.0, 1.0}));
  EXPECT_NEAR(r.rho, 1.5, 1e-15);
  EXPECT_NEAR(r.norm, 0.5, 1e-15);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_LE(max_diff(r.v_next, Vector{-h, h}), 1e-15);
}

TEST(Aci1RayleighStep, EigenvectorBreaksDown) {
  EXPECT_TRUE(throws_kind([] { aci::aci1_rayleigh_step(diag({1.0, 2.0}), Vector::unit(2, 0)); },
                          ErrorKind::breakdown));
}

TEST(Aci1RayleighStep, WiderGap) {
  const auto r = aci::aci1_rayleigh_step(diag({1.0, 3.0}), aci::normalized(Vector{1.0, 1.0}));
  EXPECT_NEAR(r.rho, 2.0, 1e-15);
  EXPECT_NEAR(r.norm, 1.0, 1e-15);
}

TEST(Aci1RayleighStep, AgreesWithProjection) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix a = aci::testing::random_matrix(6, 300 + seed, true);
    const Vector v = aci::testing::random_unit(6, 400 + seed);
    const auto step = aci::aci1_rayleigh_step(a, v);
    const auto proj = aci::arnoldi_projection(a, v, 1);
    EXPECT_NEAR(step.norm, proj.norm, 1e-12);
    EXPECT_LE(max_diff(step.v_next, *proj.w), 1e-12);
  }
}

TEST(Aci1OrthogonalRun, SingleBlockIsFixedAfterOneStep) {
  const auto tm = orthogonal({{0.35, 1}});
  const Vector v0 = aci::testing::random_unit(2, 5);
  const auto trace = aci::aci1_orthogonal_run(tm.a, v0, config(1, 1e-12));
  EXPECT_LE(aci::distance(trace.final_v, v0), 1e-14);
}

TEST(Aci1OrthogonalRun, RayleighQuotientsApproachSmallestCosine) {
  const auto tm = orthogonal({{0.2, 1}, {0.8, 1}});
  const Vector v0 = aci::random_unit_start(tm, 7, {2, {0}});
  const auto trace = aci::aci1_orthogonal_run(tm.a, v0, config(100000, 1e-13));
  ASSERT_EQ(trace.terminated_by, Termination::diff_tol_reached);
  EXPECT_NEAR(trace.records.back().alpha, 0.2, 1e-8);
  EXPECT_NEAR(trace.records.back().beta, 0.2, 1e-8);
  for (const auto& r : trace.records) {
    EXPECT_NEAR(r.norm_w_tilde * r.norm_w_tilde + r.alpha * r.alpha, 1.0, 1e-12);
    EXPECT_NEAR(r.norm_v_tilde * r.norm_v_tilde + r.beta * r.beta, 1.0, 1e-12);
    EXPECT_LE(std::abs(r.beta), std::abs(r.alpha) + 1e-12);
  }
}

TEST(Aci1OrthogonalRun, FixedPointExampleHasZeroQuotients) {
  const auto tm = orthogonal({{-0.6, 1}, {0.6, 1}});
  const Vector v0 = aci::normalized(Vector{0.3, -0.7, 0.3, -0.7});
  const auto trace = aci::aci1_orthogonal_run(tm.a, v0, config(100, 1e-300));
  for (const auto& r : trace.records) {
    EXPECT_LE(std::abs(r.alpha), 1e-15);
    EXPECT_LE(std::abs(r.beta), 1e-15);
  }
}

TEST(OptimumSGradient, AlreadyConverged) {
  const Matrix a = diag({1.0, 2.0});
  const Vector b{1.0, 2.0};
  EXPECT_TRUE(throws_kind(
      [&] { aci::optimum_s_gradient_run(a, b, Vector{1.0, 1.0}, 1, config(10, 1e-10)); },
      ErrorKind::precondition, "already converged"));
}

TEST(OptimumSGradient, SteepestDescentAlternates) {
  const Matrix a = diag({1.0, 2.0, 3.0});
  const auto r = aci::optimum_s_gradient_run(a, Vector(3), Vector{1.0, 1.0, 1.0}, 1,
                                             config(2000, 1e-10, true), 0.0);
  ASSERT_EQ(r.terminated_by, Termination::diff_tol_reached);
  const std::size_t k = r.trace.size();
  EXPECT_LT(r.trace[k - 1].diff_y2, 1e-10);
  EXPECT_LT(r.trace[k - 2].diff_y2, 1e-10);
  EXPECT_GT(aci::distance(r.final_y, r.previous_y), 1e-2);
  for (std::size_t i = 1; i < k; ++i) {
    EXPECT_LT(r.trace[i].a_norm_error, r.trace[i - 1].a_norm_error);
    EXPECT_NEAR(aci::norm(*r.trace[i].y), 1.0, 1e-12);
  }
}

TEST(OptimumSGradient, TwoDimensionalAlternation) {
  const auto r = aci::optimum_s_gradient_run(diag({1.0, 2.0}), Vector(2), Vector{1.0, 1.0}, 1,
                                             config(200, 1e-12, true), 0.0);
  ASSERT_GE(r.trace.size(), 4u);
  EXPECT_LE(aci::distance(*r.trace[2].y, *r.trace[0].y), 1e-12);
  EXPECT_LE(aci::distance(*r.trace[3].y, *r.trace[1].y), 1e-12);
  EXPECT_GT(aci::distance(*r.trace[0].y, *r.trace[1].y), 0.1);
}

TEST(OptimumSGradient, SOfTwoDifferencesShrink) {
  const auto r = aci::optimum_s_gradient_run(diag({1.0, 2.0, 3.0, 4.0}), Vector(4),
                                             Vector{1.0, -0.5, 0.8, 0.3}, 2,
                                             config(60, 1e-14), 0.0);
  ASSERT_GE(r.trace.size(), 20u);
  EXPECT_LT(r.trace.back().diff_y2, r.trace[4].diff_y2);
}

TEST(OptimumSGradient, ResidualStopDefaultsToDiffTol) {
  const Matrix a = diag({1.0, 2.0, 3.0, 4.0});
  const Vector b{1.0, 1.0, 1.0, 1.0};
  // Direction settling needs k >= 3, so an earlier stop is the residual test.
  const auto r = aci::optimum_s_gradient_run(a, b, Vector(4), 1, config(1000, 0.5));
  ASSERT_LT(r.trace.size(), 4u);
  EXPECT_EQ(r.terminated_by, Termination::diff_tol_reached);
  EXPECT_LT(r.trace.back().residual_norm, 0.5 * r.trace.front().residual_norm);
  const auto off = aci::optimum_s_gradient_run(a, b, Vector(4), 1, config(1000, 0.5), 0.0);
  EXPECT_GE(off.trace.size(), 4u);
}

TEST(OptimumSGradient, RejectsIndefinite) {
  const Matrix a{{1.0, 2.0}, {2.0, 1.0}};
  EXPECT_TRUE(throws_kind(
      [&] { aci::optimum_s_gradient_run(a, Vector{1.0, 0.0}, Vector(2), 1, config(10, 1e-10)); },
      ErrorKind::precondition));
}

}  // namespace
