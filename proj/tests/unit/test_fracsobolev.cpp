#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oscnorm/error.hpp"
#include "oscnorm/fracsobolev.hpp"
#include "oscnorm/oscnorms.hpp"
#include "test_support.hpp"

namespace oscnorm {
namespace {

double center_distance(const GridFunction& g, std::size_t a, std::size_t b) {
  const auto ia = g.cell_index(a);
  const auto ib = g.cell_index(b);
  double d2 = 0.0;
  for (std::size_t k = 0; k < ia.size(); ++k) {
    const double d = static_cast<double>(ia[k] - ib[k]) * g.cell_side();
    d2 += d * d;
  }
  return std::sqrt(d2);
}

TEST(FracParamsTest, Validation) {
  EXPECT_NO_THROW(validate(FracParams{0.5, 1.0}));
  EXPECT_THROW(validate(FracParams{0.0, 2.0}), ValidationError);
  EXPECT_THROW(validate(FracParams{1.0, 2.0}), ValidationError);
  EXPECT_THROW(validate(FracParams{0.5, 0.9}), ValidationError);
  EXPECT_THROW(validate(FracParams{0.5, INFINITY}), ValidationError);
}

TEST(SobolevExponentTest, Examples) {
  EXPECT_DOUBLE_EQ(sobolev_exponent({0.5, 1.5}, 1), 6.0);
  EXPECT_DOUBLE_EQ(sobolev_exponent({0.5, 2.0}, 2), 4.0);
  EXPECT_DOUBLE_EQ(sobolev_exponent({0.25, 2.0}, 2), 8.0 / 3.0);
  EXPECT_TRUE(std::isinf(sobolev_exponent({0.5, 2.0}, 1)));
  EXPECT_THROW(sobolev_exponent({0.5, 3.0}, 1), ValidationError);
}

TEST(GagliardoTest, TwoCellExample) {
  const GridFunction g(1, 1, {0, 1});
  const GridFunction field = gagliardo_field(g, {0.5, 2.0});
  EXPECT_DOUBLE_EQ(field[0], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(field[1], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(gagliardo_seminorm(g, {0.5, 2.0}), std::sqrt(2.0));
}

TEST(GagliardoTest, ConstantGivesZero) {
  const GridFunction c = generate(ConstantGen{3.0}, 2, 3);
  const GridFunction field = gagliardo_field(c, {0.5, 2.0});
  for (double v : field.cells()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(gagliardo_seminorm(c, {0.3, 1.0}), 0.0);
  EXPECT_EQ(gagliardo_seminorm(c, {0.7, 3.0}), 0.0);
}

TEST(GagliardoTest, MatchesDirectDoubleSum) {
  std::mt19937_64 rng(51);
  for (const FracParams fp : {FracParams{0.5, 2.0}, FracParams{0.25, 1.0}, FracParams{0.75, 3.0}, FracParams{0.4, 1.5}}) {
    for (int dim = 1; dim <= 2; ++dim) {
      const GridFunction g = testing::random_grid(rng, dim, 3);
      const GridFunction field = gagliardo_field(g, fp);
      const double hn = g.cell_measure();
      double total = 0.0;
      for (std::size_t y = 0; y < g.size(); ++y) {
        double s = 0.0;
        for (std::size_t x = 0; x < g.size(); ++x) {
          if (x == y) continue;
          s += std::pow(std::abs(g[x] - g[y]), fp.p) * std::pow(center_distance(g, x, y), -dim - fp.alpha * fp.p) * hn;
        }
        EXPECT_LT(testing::rel_err(field[y], std::pow(s, 1.0 / fp.p)), 1e-12);
        total += s * hn;
      }
      EXPECT_LT(testing::rel_err(gagliardo_seminorm(g, fp), std::pow(total, 1.0 / fp.p)), 1e-12);
      EXPECT_LT(testing::rel_err(w_alpha_pY_norm(g, fp, Lq{fp.p}), gagliardo_seminorm(g, fp)), 1e-12);
    }
  }
}

TEST(SelfCellTest, OneDimensionalClosedForm) {
  for (double alpha : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(self_cell_integral(1, alpha), 2.0 * std::pow(0.5, alpha) / alpha, 1e-13);
  }
  EXPECT_NEAR(self_cell_integral(1, 0.5), 2.8284271247461903, 1e-13);
}

TEST(SelfCellTest, TwoDimensionalPolarOracle) {
  // 8 ∫_0^{π/4} (1/(2cosθ))^α / α dθ by composite Simpson.
  for (double alpha : {0.25, 0.5, 0.75}) {
    const int n = 2000;
    const double h = std::numbers::pi / 4 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double f = std::pow(0.5 / std::cos(i * h), alpha) / alpha;
      s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    const double oracle = 8.0 * s * h / 3.0;
    EXPECT_LT(testing::rel_err(self_cell_integral(2, alpha), oracle), 1e-11) << alpha;
  }
}

TEST(RieszTest, ZeroAndDirectSum) {
  const GridFunction zero = riesz_potential(GridFunction(2, 2, std::vector<double>(16, 0.0)), 0.5);
  for (double v : zero.cells()) EXPECT_EQ(v, 0.0);
  std::mt19937_64 rng(52);
  for (int dim = 1; dim <= 2; ++dim) {
    for (double alpha : {0.25, 0.5}) {
      const GridFunction g = testing::random_grid(rng, dim, 3);
      const GridFunction out = riesz_potential(g, alpha);
      const double self = self_cell_integral(dim, alpha) * std::pow(g.cell_side(), alpha);
      for (std::size_t y = 0; y < g.size(); ++y) {
        double s = g[y] * self;
        for (std::size_t x = 0; x < g.size(); ++x)
          if (x != y) s += g[x] * std::pow(center_distance(g, x, y), alpha - dim) * g.cell_measure();
        EXPECT_NEAR(out[y], s, 1e-12 * std::max(1.0, sup_norm(g)));
      }
    }
  }
}

TEST(RieszTest, SelfAdjointAndPositive) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + trial % 2;
    const GridFunction a = testing::random_grid(rng, dim, 3);
    const GridFunction b = testing::random_grid(rng, dim, 3);
    const GridFunction ia = riesz_potential(a, 0.5);
    const GridFunction ib = riesz_potential(b, 0.5);
    double lhs = 0.0, rhs = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      lhs += ia[i] * b[i];
      rhs += a[i] * ib[i];
      ref += std::abs(ia[i] * b[i]);
    }
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, ref));
    const GridFunction positive = riesz_potential(abs(a), 0.5);
    for (double v : positive.cells()) EXPECT_GE(v, 0.0);
  }
}

TEST(WitnessTest, ConstantAndTwoCellExample) {
  EXPECT_EQ(witness_constant(1, {0.5, 2.0}), 1.0);
  EXPECT_DOUBLE_EQ(witness_constant(2, {0.5, 2.0}), std::pow(2.0, 1.5));
  const GridFunction g(1, 1, {0, 1});
  const GridFunction w = sobolev_witness(g, {0.5, 2.0});
  const GridFunction expected = riesz_potential(GridFunction(1, 1, {std::sqrt(2.0), std::sqrt(2.0)}), 0.5);
  EXPECT_DOUBLE_EQ(w[0], expected[0]);
  EXPECT_DOUBLE_EQ(w[1], expected[1]);
  const GridFunction c = generate(ConstantGen{2.0}, 2, 2);
  const GridFunction flat = sobolev_witness(c, {0.5, 2.0});
  for (double v : flat.cells()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(gamma_slack(CubeStatsTree(c), sobolev_witness(c, {0.5, 2.0})), 0.0);
}

TEST(WitnessTest, IsAdmissibleOnRandomFunctions) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 2;
    const GridFunction g = testing::random_grid(rng, dim, 2 + trial % 3);
    for (const FracParams fp : {FracParams{0.5, 2.0}, FracParams{0.25, 1.5}, FracParams{0.5, 1.0}}) {
      const CubeStatsTree tree(g);
      const double slack = gamma_slack(tree, sobolev_witness(g, fp));
      EXPECT_LE(slack, 1e-9 * std::max(1.0, tree.root().osc2)) << "trial " << trial << " alpha " << fp.alpha;
    }
  }
}

}  // namespace
}  // namespace oscnorm
