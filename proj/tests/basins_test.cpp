#include <gtest/gtest.h>

#include <numeric>

#include "coevo/basins.hpp"

using namespace coevo;

namespace {
BasinSettings small(std::size_t n = 5) {
  BasinSettings cfg;
  cfg.n_per_axis = n;
  cfg.t_end = 100;
  return cfg;
}
}  // namespace

TEST(Grid, CellCentred) {
  const auto g = basin_grid(4);
  ASSERT_EQ(g.size(), 64u);
  EXPECT_EQ(g.front(), (PopulationState{0.125, 0.125, 0.125}));
  EXPECT_EQ(g.back(), (PopulationState{0.875, 0.875, 0.875}));
  for (const auto& s : g) {
    EXPECT_GT(s.x1, 0.0);
    EXPECT_LT(s.yB1, 1.0);
  }
}

TEST(ClassifyEndpoint, BaselineCorner) {
  const auto pts = enumerate_fixed_points(Scenario::baseline(), {});
  const auto t = integrate({0.5, 0.5, 0.5}, Scenario::baseline(), {}, 200, 0.01, 10);
  const auto e = classify_endpoint(t, pts);
  EXPECT_EQ(e.kind, EndpointKind::Corner);
  EXPECT_EQ(e.label, "(H,A,F)");
}

TEST(ClassifyEndpoint, RecourseCycle) {
  const auto pts = enumerate_fixed_points(Scenario::recourse(), {});
  const auto t = integrate({0.85, 0.5, 0.1}, Scenario::recourse(), {}, 200, 0.01, 10);
  EXPECT_EQ(classify_endpoint(t, pts).kind, EndpointKind::Cycle);
}

TEST(ClassifyEndpoint, ConstantCorner) {
  const auto pts = enumerate_fixed_points(Scenario::manipulation_proof(), {});
  const auto t = integrate({1, 1, 0}, Scenario::manipulation_proof(), {}, 5, 0.01, 1);
  const auto e = classify_endpoint(t, pts);
  EXPECT_EQ(e.kind, EndpointKind::Corner);
  EXPECT_EQ(e.label, "(M,NA,I)");
}

TEST(ClassifyEndpoint, CornerOnLineKeepsCornerLabel) {
  const auto pts = enumerate_fixed_points(Scenario::manipulation_proof(), {});
  const auto t = integrate({1, 0, 1}, Scenario::manipulation_proof(), {}, 1, 0.01, 1);
  EXPECT_EQ(classify_endpoint(t, pts).kind, EndpointKind::Corner);
}

TEST(ClassifyEndpoint, FixedLineMember) {
  const auto pts = enumerate_fixed_points(Scenario::recourse(), {});
  const auto t = integrate({0.37, 0, 0}, Scenario::recourse(), {}, 1, 0.01, 1);
  const auto e = classify_endpoint(t, pts);
  EXPECT_EQ(e.kind, EndpointKind::FixedLine);
  EXPECT_EQ(e.label, "(x1,A,I)");
}

TEST(ClassifyEndpoint, UnsettledIsNonConverged) {
  const auto pts = enumerate_fixed_points(Scenario::baseline(), {});
  const auto t = integrate({0.5, 0.5, 0.5}, Scenario::baseline(), {}, 0.5, 0.01, 1);
  EXPECT_EQ(classify_endpoint(t, pts).kind, EndpointKind::NonConverged);
  EXPECT_EQ(classify_endpoint(Trajectory{}, pts).kind, EndpointKind::NonConverged);
}

TEST(BasinSizes, BaselineAllHighAdaptFake) {
  const auto rep = basin_sizes(Scenario::baseline(), {}, small());
  EXPECT_EQ(rep.total, 125u);
  EXPECT_DOUBLE_EQ(rep.fraction("(H,A,F)"), 1.0);
  EXPECT_DOUBLE_EQ(rep.offset, 0.5);
}

TEST(BasinSizes, CountsPartitionGrid) {
  const auto rep = basin_sizes(Scenario::recourse(), {}, small(6));
  std::size_t n = 0;
  double f = 0;
  for (const auto& e : rep.entries) {
    n += e.count;
    f += e.fraction;
  }
  EXPECT_EQ(n, rep.total);
  EXPECT_NEAR(f, 1.0, 1e-12);
  EXPECT_TRUE(std::is_sorted(rep.entries.begin(), rep.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.kind, a.label) < std::tie(b.kind, b.label);
  }));
}

TEST(BasinSizes, ThreadCountDoesNotMatter) {
  auto cfg = small(5);
  cfg.threads = 1;
  const auto a = basin_sizes(Scenario::manipulation_proof(), {}, cfg);
  cfg.threads = 4;
  const auto b = basin_sizes(Scenario::manipulation_proof(), {}, cfg);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].label, b.entries[i].label);
    EXPECT_EQ(a.entries[i].count, b.entries[i].count);
  }
}

TEST(BasinSizes, RejectsTinyGrid) {
  EXPECT_THROW(basin_sizes(Scenario::baseline(), {}, small(1)), InvalidArgument);
  GameParameters p;
  p.c_F = 9;
  EXPECT_THROW(basin_sizes(Scenario::baseline(), p, small()), InvalidParameters);
}

TEST(BasinSizes, UnstableStepCountedAsFailure) {
  auto cfg = small(3);
  cfg.dt = 2.0;
  cfg.t_end = 20;
  const auto rep = basin_sizes(Scenario::baseline(), {}, cfg);
  EXPECT_EQ(rep.integration_failures, rep.total);
  EXPECT_DOUBLE_EQ(rep.fraction("non-converged"), 1.0);
}

TEST(Sweep, SingleCellEqualsDirectCall) {
  GameParameters base;
  base.p_G = 0.85;
  const double ratios[] = {0.4};
  const double rates[] = {2.0};
  const auto sweep = sweep_basins(Scenario::baseline(), base, ratios, rates, small());
  ASSERT_EQ(sweep.cells.size(), 1u);
  ASSERT_TRUE(sweep.cells[0][0].report);
  GameParameters p = base;
  p.rho = 20;
  p.r = 2;
  const auto direct = basin_sizes(Scenario::baseline(), p, small());
  const auto& got = *sweep.cells[0][0].report;
  ASSERT_EQ(got.entries.size(), direct.entries.size());
  for (std::size_t i = 0; i < got.entries.size(); ++i) {
    EXPECT_EQ(got.entries[i].label, direct.entries[i].label);
    EXPECT_EQ(got.entries[i].count, direct.entries[i].count);
  }
  EXPECT_EQ(got.params, p);
}

TEST(Sweep, BadCellRecordsError) {
  const double ratios[] = {0.2, -1.0};
  const double rates[] = {1.0};
  const auto sweep = sweep_basins(Scenario::baseline(), {}, ratios, rates, small(3));
  EXPECT_TRUE(sweep.cells[0][0].report);
  EXPECT_FALSE(sweep.cells[1][0].report);
  EXPECT_NE(sweep.cells[1][0].error.find("rho"), std::string::npos);
}
