#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "coevo/stability.hpp"
#include "oracles.hpp"

using namespace coevo;

namespace {
const Scenario kBuiltins[] = {Scenario::baseline(), Scenario::manipulation_proof(),
                              Scenario::recourse()};

std::vector<double> sorted_real(const Spectrum& s) {
  std::vector<double> v;
  for (const auto& e : s) v.push_back(e.real());
  std::sort(v.begin(), v.end());
  return v;
}

// Central differences of the hand-expanded systems.
Mat3 oracle_jacobian(ScenarioKind k, const PopulationState& s, const GameParameters& p) {
  const double h = 1e-5;
  Mat3 J{};
  for (int c = 0; c < 3; ++c) {
    Vec3 up = s.as_vec(), dn = s.as_vec();
    up[c] += h;
    dn[c] -= h;
    const Vec3 fu = oracle::rhs(k, PopulationState::from_vec(up), p);
    const Vec3 fd = oracle::rhs(k, PopulationState::from_vec(dn), p);
    for (int r = 0; r < 3; ++r) J[r][c] = (fu[r] - fd[r]) / (2 * h);
  }
  return J;
}

const FixedPointReport* find(const std::vector<FixedPointReport>& pts, const PopulationState& s) {
  for (const auto& p : pts)
    if (distance(p.location, s) < 1e-9) return &p;
  return nullptr;
}
}  // namespace

TEST(Classify, Examples) {
  EXPECT_EQ(classify({Complex(-4), Complex(-45), Complex(-25)}), Stability::Stable);
  EXPECT_EQ(classify({Complex(-5), Complex(2.1), Complex(-1)}), Stability::Saddle);
  EXPECT_EQ(classify({Complex(1), Complex(2), Complex(0.5)}), Stability::Unstable);
  EXPECT_EQ(classify({Complex(-1), Complex(0, 1.3), Complex(0, -1.3)}),
            Stability::CenterOrInconclusive);
  EXPECT_EQ(classify({Complex(-1), Complex(1e-12), Complex(-2)}), Stability::CenterOrInconclusive);
}

TEST(PgStar, Values) {
  GameParameters p;
  EXPECT_NEAR(pg_star(p), 50.0 / 60.0, 1e-12);
  p.rho = p.lambda;
  EXPECT_DOUBLE_EQ(pg_star(p), 0.5);
  p = {};
  p.rho = 20;
  EXPECT_NEAR(pg_star(p), 0.7142857142857143, 1e-12);
}

TEST(JacobianAnalytic, BaselineCornerEntry) {
  const auto J = jacobian_analytic({0, 0, 1}, Scenario::baseline(), {});
  EXPECT_DOUBLE_EQ(J[2][2], -4.0);
}

TEST(JacobianAnalytic, BaselineCornerSpectrum) {
  const auto s = eigenvalues_3x3(jacobian_analytic({0, 0, 1}, Scenario::baseline(), {}));
  const auto v = sorted_real(s);
  EXPECT_NEAR(v[0], -45, 1e-8);
  EXPECT_NEAR(v[1], -25, 1e-8);
  EXPECT_NEAR(v[2], -4, 1e-8);
}

TEST(JacobianAnalytic, ManipulationProofCornerSpectrum) {
  const auto v = sorted_real(eigenvalues_3x3(jacobian_analytic({1, 1, 0}, Scenario::manipulation_proof(), {})));
  EXPECT_NEAR(v[0], -46, 1e-8);
  EXPECT_NEAR(v[1], -10, 1e-8);
  EXPECT_NEAR(v[2], -5, 1e-8);
}

TEST(JacobianAnalytic, RecourseCornerSpectrum) {
  GameParameters p;
  for (double pg : {0.3, 0.5, 0.9}) {
    p.p_G = pg;
    const auto v = sorted_real(eigenvalues_3x3(jacobian_analytic({1, 1, 1}, Scenario::recourse(), p)));
    std::vector<double> want{-p.c_I, p.c_F - p.c_I, p.r * (p.lambda * (1 - pg) - p.rho * pg)};
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(v[i], want[i], 1e-8);
  }
}

TEST(JacobianAnalytic, MatchesOracleDerivatives) {
  std::mt19937_64 rng(8);
  const GameParameters p;
  for (const auto& sc : kBuiltins)
    for (int k = 0; k < 100; ++k) {
      const auto s = oracle::random_interior(rng);
      const auto A = jacobian_analytic(s, sc, p);
      const auto O = oracle_jacobian(sc.kind, s, p);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) ASSERT_NEAR(A[r][c], O[r][c], 1e-6) << to_string(sc.kind);
    }
}

TEST(JacobianAnalytic, FixedCoordinateRowsDecouple) {
  // A coordinate sitting on a face has no off-diagonal derivative.
  const GameParameters p;
  for (const auto& sc : kBuiltins) {
    const auto J = jacobian_analytic({0, 0.4, 1}, sc, p);
    EXPECT_EQ(J[0][1], 0.0);
    EXPECT_EQ(J[0][2], 0.0);
    EXPECT_EQ(J[2][0], 0.0);
    EXPECT_EQ(J[2][1], 0.0);
  }
}

TEST(JacobianAnalytic, CustomUnsupported) {
  EXPECT_THROW(jacobian_analytic({0.5, 0.5, 0.5}, Scenario::custom(tables::kBaseline), {}),
               UnsupportedScenario);
}

TEST(JacobianFd, MatchesAnalyticAtRandomStates) {
  std::mt19937_64 rng(9);
  const GameParameters p;
  for (const auto& sc : kBuiltins)
    for (int k = 0; k < 100; ++k) {
      const auto s = oracle::random_interior(rng);
      const auto A = jacobian_analytic(s, sc, p);
      const auto F = jacobian_fd(s, sc, p);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) ASSERT_NEAR(A[r][c], F[r][c], 1e-6);
    }
}

TEST(JacobianFd, OnFacesAndCorners) {
  const GameParameters p;
  for (const auto& sc : kBuiltins)
    for (const PopulationState s : {PopulationState{0, 0, 1}, {1, 1, 0}, {1, 0.3, 0}, {0.2, 1, 0.7}}) {
      const auto A = jacobian_analytic(s, sc, p);
      const auto F = jacobian_fd(s, sc, p);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) ASSERT_NEAR(A[r][c], F[r][c], 1e-6);
    }
}

TEST(JacobianFd, CustomCopyOfBaseline) {
  std::mt19937_64 rng(10);
  const GameParameters p;
  const auto custom = Scenario::custom(tables::kBaseline);
  for (int k = 0; k < 50; ++k) {
    const auto s = oracle::random_interior(rng);
    const auto A = jacobian_analytic(s, Scenario::baseline(), p);
    const auto F = jacobian_fd(s, custom, p);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) ASSERT_NEAR(A[r][c], F[r][c], 1e-6);
  }
}

TEST(JacobianFd, RecourseCentreTraceIsMinusCF) {
  // Spectrum {-c_F, +iw, -iw}: the trace equals -c_F, not zero.
  const GameParameters p;
  const auto J = jacobian_fd({0.92, 1, 0.2}, Scenario::recourse(), p);
  EXPECT_NEAR(trace(J), -p.c_F, 1e-6);
  EXPECT_NEAR(trace(jacobian_analytic({0.92, 1, 0.2}, Scenario::recourse(), p)), -p.c_F, 1e-12);
}

TEST(RecourseCentre, PurelyImaginaryPair) {
  const GameParameters p;
  const auto c = recourse_center(p);
  ASSERT_TRUE(c);
  EXPECT_NEAR(c->x1, 0.92, 1e-15);
  EXPECT_NEAR(c->yB1, 0.2, 1e-15);
  const auto s = eigenvalues_3x3(jacobian_analytic(*c, Scenario::recourse(), p));
  int complex_count = 0;
  for (const auto& e : s) {
    if (std::abs(e.imag()) > 1e-8) {
      ++complex_count;
      EXPECT_LT(std::abs(e.real()), 1e-8);
    } else {
      EXPECT_NEAR(e.real(), -p.c_F, 1e-8);
    }
  }
  EXPECT_EQ(complex_count, 2);
}

TEST(RecourseCentre, AbsentAboveThreshold) {
  GameParameters p;
  p.p_G = 0.85;
  EXPECT_FALSE(recourse_center(p));
}

TEST(Enumerate, BaselineDefaults) {
  const auto pts = enumerate_fixed_points(Scenario::baseline(), {});
  const auto* hf = find(pts, {0, 0, 1});
  const auto* mnf = find(pts, {1, 1, 1});
  ASSERT_TRUE(hf && mnf);
  EXPECT_EQ(hf->classification, Stability::Stable);
  EXPECT_EQ(hf->label, "(H,A,F)");
  EXPECT_NE(mnf->classification, Stability::Stable);
  for (const auto& p : pts) EXPECT_LT(p.rhs_norm, 1e-12);
}

TEST(Enumerate, ThresholdSweep) {
  GameParameters p;
  for (double pg : {0.5, 0.8, 0.85, 0.95}) {
    p.p_G = pg;
    const auto pts = enumerate_fixed_points(Scenario::baseline(), p);
    const auto* mnf = find(pts, {1, 1, 1});
    ASSERT_TRUE(mnf);
    EXPECT_EQ(mnf->classification == Stability::Stable, pg > pg_star(p)) << pg;
    EXPECT_EQ(find(pts, {0, 0, 1})->classification, Stability::Stable);
  }
}

TEST(Enumerate, RecourseCentreListed) {
  const auto pts = enumerate_fixed_points(Scenario::recourse(), {});
  const auto* c = find(pts, {0.92, 1, 0.2});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->kind, FixedPointKind::Interior);
  EXPECT_EQ(c->classification, Stability::CenterOrInconclusive);
}

TEST(Enumerate, ManipulationProofStableCorner) {
  const auto pts = enumerate_fixed_points(Scenario::manipulation_proof(), {});
  const auto* c = find(pts, {1, 1, 0});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->label, "(M,NA,I)");
  EXPECT_EQ(c->classification, Stability::Stable);
  EXPECT_TRUE(std::any_of(pts.begin(), pts.end(),
                          [](const auto& p) { return p.kind == FixedPointKind::LineMember; }));
}

TEST(Enumerate, NontrivialPointsAreFixed) {
  for (const auto& sc : kBuiltins)
    for (const auto& p : enumerate_fixed_points(sc, {}))
      if (p.kind == FixedPointKind::Nontrivial) {
        EXPECT_LT(norm(oracle::rhs(sc.kind, p.location, {})), 1e-10);
      }
}
