#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "coevo/eigen3x3.hpp"

using namespace coevo;

namespace {
std::vector<double> sorted_real(const Spectrum& s) {
  std::vector<double> v;
  for (const auto& e : s) v.push_back(e.real());
  std::sort(v.begin(), v.end());
  return v;
}
}  // namespace

TEST(Eigen, Diagonal) {
  const Mat3 a{{{-4, 0, 0}, {0, -45, 0}, {0, 0, -25}}};
  const auto s = eigenvalues_3x3(a);
  EXPECT_NEAR(s[0].real(), -4, 1e-12);
  EXPECT_NEAR(s[1].real(), -25, 1e-12);
  EXPECT_NEAR(s[2].real(), -45, 1e-12);
  for (const auto& e : s) EXPECT_EQ(e.imag(), 0.0);
}

TEST(Eigen, RotationBlock) {
  const Mat3 a{{{0, -1, 0}, {1, 0, 0}, {0, 0, -1}}};
  const auto s = eigenvalues_3x3(a);
  EXPECT_NEAR(std::abs(s[0] - Complex(0, 1)), 0, 1e-12);
  EXPECT_NEAR(std::abs(s[1] - Complex(0, -1)), 0, 1e-12);
  EXPECT_NEAR(std::abs(s[2] - Complex(-1, 0)), 0, 1e-12);
}

TEST(Eigen, RepeatedRoot) {
  const Mat3 a{{{2, 1, 0}, {0, 2, 0}, {0, 0, 2}}};
  for (const auto& e : eigenvalues_3x3(a)) EXPECT_NEAR(std::abs(e - Complex(2, 0)), 0, 1e-6);
}

TEST(Eigen, TriangularReadsDiagonal) {
  const Mat3 a{{{-5, 3, 7}, {0, -46, 2}, {0, 0, -10}}};
  EXPECT_EQ(sorted_real(eigenvalues_3x3(a)), (std::vector<double>{-46, -10, -5}));
  const Mat3 b{{{-5, 3, 7}, {1, -46, 2}, {0, 0, -10}}};
  const auto s = eigenvalues_3x3(b);
  EXPECT_NEAR(s[1].real(), -10, 1e-12);
}

TEST(Eigen, DiagonalWithRepeatedEntry) {
  const Mat3 a{{{-4, 0, 0}, {0, -5, 0}, {0, 0, -4}}};
  const auto s = eigenvalues_3x3(a);
  EXPECT_EQ(s[0], Complex(-4));
  EXPECT_EQ(s[1], Complex(-4));
  EXPECT_EQ(s[2], Complex(-5));
}

TEST(Eigen, DecoupledComplexPair) {
  const Mat3 a{{{0, 0, 0}, {0, 0, -2}, {0, 2, 0}}};
  const auto s = eigenvalues_3x3(a);
  EXPECT_EQ(s[0], Complex(0, 2));
  EXPECT_EQ(s[1], Complex(0));
  EXPECT_EQ(s[2], Complex(0, -2));
}

TEST(Eigen, RandomMatricesSatisfyInvariants) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int k = 0; k < 500; ++k) {
    Mat3 a;
    for (auto& row : a)
      for (auto& v : row) v = u(rng);
    const auto s = eigenvalues_3x3(a);
    const Complex sum = s[0] + s[1] + s[2];
    const Complex prod = s[0] * s[1] * s[2];
    ASSERT_NEAR(sum.real(), trace(a), 1e-9);
    ASSERT_NEAR(sum.imag(), 0, 1e-9);
    ASSERT_NEAR(prod.real(), determinant(a), 1e-8 * (1 + std::abs(determinant(a))));
    const double scale = std::pow(frobenius_norm(a), 3);
    for (const auto& e : s) ASSERT_LT(std::abs(shifted_determinant(a, e)), 1e-9 * scale);
  }
}

TEST(Eigen, SortedByRealPart) {
  const Mat3 a{{{1, 0, 0}, {0, 3, 0}, {0, 0, 2}}};
  const auto s = eigenvalues_3x3(a);
  EXPECT_GE(s[0].real(), s[1].real());
  EXPECT_GE(s[1].real(), s[2].real());
}
