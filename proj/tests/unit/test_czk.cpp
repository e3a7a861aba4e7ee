#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oscnorm/czk.hpp"
#include "oscnorm/error.hpp"
#include "test_support.hpp"

namespace oscnorm {
namespace {

TEST(CzDecomposeTest, ConstantBelowHeight) {
  const GridFunction c = generate(ConstantGen{-2.0}, 2, 3);
  const CzDecomposition cz = cz_decompose(c, 2.5);
  EXPECT_TRUE(cz.stopping_cubes.empty());
  EXPECT_EQ(cz.stopping_measure, 0.0);
  EXPECT_EQ(cz.good, c);
  for (double v : cz.bad.cells()) EXPECT_EQ(v, 0.0);
}

TEST(CzDecomposeTest, HandExample) {
  const CzDecomposition cz = cz_decompose(GridFunction(1, 2, {0, 0, 4, 0}), 1.5);
  ASSERT_EQ(cz.stopping_cubes.size(), 1u);
  EXPECT_EQ(cz.stopping_cubes[0], (DyadicCube{1, {1}}));
  EXPECT_EQ(cz.stopping_measure, 0.5);
  EXPECT_EQ(cz.good, GridFunction(1, 2, {0, 0, 2, 2}));
  EXPECT_EQ(cz.bad, GridFunction(1, 2, {0, 0, 2, -2}));
  EXPECT_LE(sup_norm(cz.good), 2 * 1.5);
}

TEST(CzDecomposeTest, WholeCubeStopsWhenMeanExceedsHeight) {
  const CzDecomposition cz = cz_decompose(GridFunction(1, 1, {3, 1}), 1.0);
  ASSERT_EQ(cz.stopping_cubes.size(), 1u);
  EXPECT_EQ(cz.stopping_cubes[0].level, 0);
  EXPECT_EQ(cz.good, GridFunction(1, 1, {2, 2}));
}

TEST(CzDecomposeTest, LargeHeightLeavesNoBadPart) {
  std::mt19937_64 rng(61);
  const GridFunction g = testing::random_grid(rng, 2, 4);
  const CzDecomposition cz = cz_decompose(g, 2 * sup_norm(g) + 1);
  EXPECT_TRUE(cz.stopping_cubes.empty());
  EXPECT_EQ(cz.good, g);
  EXPECT_EQ(sup_norm(cz.bad), 0.0);
}

TEST(CzDecomposeTest, Invariants) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 1 + trial % 2;
    const GridFunction g = testing::random_grid(rng, dim, 2 + trial % 4);
    const double l1 = integral(abs(g));
    if (l1 == 0.0) continue;
    for (double factor : {0.5, 1.0, 2.0, 4.0, 16.0}) {
      const double lambda = factor * l1;
      const CzDecomposition cz = cz_decompose(g, lambda);
      const double ref = std::max(1.0, sup_norm(g));
      for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(cz.good[i] + cz.bad[i], g[i], 4e-16 * ref);
      EXPECT_LE(sup_norm(cz.good), std::ldexp(lambda, dim) * (1 + 1e-12));
      EXPECT_LE(cz.stopping_measure, l1 / lambda * (1 + 1e-12));

      std::vector<bool> covered(g.size(), false);
      for (const DyadicCube& q : cz.stopping_cubes) {
        double bad_sum = 0.0, abs_sum = 0.0, cells = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const auto idx = g.cell_index(i);
          if (!q.contains(DyadicCube{g.level(), {idx.begin(), idx.end()}})) continue;
          EXPECT_FALSE(covered[i]);
          covered[i] = true;
          bad_sum += cz.bad[i];
          abs_sum += std::abs(g[i]);
          cells += 1;
        }
        EXPECT_NEAR(bad_sum, 0.0, 1e-13 * ref * cells);
        EXPECT_GT(abs_sum / cells, lambda * (1 - 1e-12));
      }
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!covered[i]) {
          EXPECT_LE(std::abs(g[i]), lambda);
          EXPECT_EQ(cz.bad[i], 0.0);
        }
      }
    }
  }
}

TEST(CzDecomposeTest, RejectsBadHeight) {
  const GridFunction g(1, 1, {0, 1});
  EXPECT_THROW(cz_decompose(g, 0.0), ValidationError);
  EXPECT_THROW(cz_decompose(g, -1.0), ValidationError);
  EXPECT_THROW(cz_decompose(g, INFINITY), ValidationError);
}

TEST(CzKCompareTest, Constant) {
  const CzKComparison cmp = cz_k_compare(generate(ConstantGen{3.0}, 1, 3), 0.25);
  EXPECT_DOUBLE_EQ(cmp.k_exact, 0.75);
  EXPECT_DOUBLE_EQ(cmp.k_cz, 0.75);
  EXPECT_DOUBLE_EQ(cmp.ratio, 1.0);
  EXPECT_EQ(cz_k_compare(generate(ConstantGen{0.0}, 1, 3), 0.5).ratio, 1.0);
}

TEST(CzKCompareTest, SpikeExample) {
  const CzKComparison cmp = cz_k_compare(GridFunction(1, 2, {0, 0, 4, 0}), 0.25);
  EXPECT_EQ(cmp.lambda, 1.0);
  EXPECT_EQ(cmp.k_exact, 1.0);
  EXPECT_EQ(cmp.k_cz, 1.5);
  EXPECT_EQ(cmp.ratio, 1.5);
}

TEST(CzKCompareTest, CzBoundDominatesExactK) {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 30; ++trial) {
    const GridFunction g = testing::random_grid(rng, 1 + trial % 2, 4);
    for (double t : {0.5, 0.25, 0.125, 1.0 / 32}) {
      const CzKComparison cmp = cz_k_compare(g, t);
      EXPECT_GE(cmp.ratio, 1.0 - 1e-12);
      EXPECT_TRUE(std::isfinite(cmp.ratio));
    }
  }
  EXPECT_THROW(cz_k_compare(GridFunction(1, 1, {0, 1}), 0.0), ValidationError);
  EXPECT_THROW(cz_k_compare(GridFunction(1, 1, {0, 1}), 1.0), ValidationError);
}

}  // namespace
}  // namespace oscnorm
