#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oscnorm/error.hpp"
#include "oscnorm/gridfn.hpp"
#include "test_support.hpp"

namespace oscnorm {
namespace {

TEST(GridFunctionTest, RejectsWrongCellCount) {
  EXPECT_THROW(GridFunction(1, 2, {1.0, 2.0, 3.0}), ValidationError);
  EXPECT_THROW(GridFunction(2, 1, {1.0, 2.0}), ValidationError);
}

TEST(GridFunctionTest, RejectsNonFiniteValues) {
  EXPECT_THROW(GridFunction(1, 1, {0.0, NAN}), ValidationError);
  EXPECT_THROW(GridFunction(1, 1, {INFINITY, 0.0}), ValidationError);
}

TEST(GridFunctionTest, IndexRoundTrip) {
  const GridFunction g(2, 2, std::vector<double>(16, 0.0));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flat_index(g.cell_index(i)), i);
  EXPECT_EQ(g.cell_index(6), (std::vector<std::int64_t>{1, 2}));
  EXPECT_DOUBLE_EQ(g.cell_measure(), 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(g.cell_side(), 0.25);
}

TEST(GeneratorTest, Constant) {
  const GridFunction g = generate(ConstantGen{5.0}, 1, 2);
  EXPECT_EQ(g, GridFunction(1, 2, {5, 5, 5, 5}));
}

TEST(GeneratorTest, IndicatorIsExact) {
  const GridFunction g = generate(IndicatorGen{{0.5}, {1.0}, 1.0}, 1, 1);
  EXPECT_EQ(g, GridFunction(1, 1, {0, 1}));
  // A box cutting cells in half gives averages of 1/2.
  const GridFunction h = generate(IndicatorGen{{0.125}, {0.375}, 1.0}, 1, 2);
  EXPECT_EQ(h, GridFunction(1, 2, {0.5, 0.5, 0, 0}));
}

TEST(GeneratorTest, PowerFirstCellApproachesClosedForm) {
  // (1/|c|)∫_0^{1/4} x^{-1/2} dx = 4 from the antiderivative 2√x. Midpoint
  // subsampling converges like m^{-1/2} on the singular cell.
  const double exact = 2.0 * std::sqrt(0.25) / 0.25;
  const GridFunction g = generate(PowerGen{{0.0}, 0.5, 16}, 1, 2);
  double midpoint = 0.0;
  for (int i = 0; i < 16; ++i) midpoint += 1.0 / std::sqrt((i + 0.5) / 64.0) / 16.0;
  EXPECT_NEAR(g[0], midpoint, 1e-13);
  EXPECT_NEAR(g[0], exact, 0.1 * exact);
  double previous_error = std::abs(g[0] - exact);
  for (int m : {64, 256, 4096}) {
    const double err = std::abs(generate(PowerGen{{0.0}, 0.5, m}, 1, 2)[0] - exact);
    EXPECT_LT(err, previous_error);
    previous_error = err;
  }
  EXPECT_LT(previous_error, 0.01 * exact);
  // Away from the singularity midpoint subsampling is accurate.
  const double cell3 = (2.0 * std::sqrt(1.0) - 2.0 * std::sqrt(0.75)) / 0.25;
  EXPECT_NEAR(g[3], cell3, 1e-4);
}

TEST(GeneratorTest, PowerRejectsNonIntegrableExponent) {
  EXPECT_THROW(generate(PowerGen{{0.0}, 1.0, 4}, 1, 2), ValidationError);
  EXPECT_NO_THROW(generate(PowerGen{{0.0, 0.0}, 1.5, 4}, 2, 2));
}

TEST(GeneratorTest, UnknownDistributionRejected) {
  EXPECT_THROW(parse_distribution("cauchy"), ValidationError);
  EXPECT_THROW(parse_generator("random:dist=cauchy"), ValidationError);
  EXPECT_THROW(parse_generator("sawtooth"), ValidationError);
  EXPECT_THROW(parse_generator("constant:colour=3"), ValidationError);
}

TEST(GeneratorTest, CheckerboardAveragesExact) {
  const GridFunction g = generate(CheckerboardGen{2.0}, 1, 2);
  EXPECT_EQ(g, GridFunction(1, 2, {0, 0, 1, 1}));
  const GridFunction h = generate(CheckerboardGen{4.0}, 2, 1);
  EXPECT_EQ(h, GridFunction(2, 1, {0.5, 0.5, 0.5, 0.5}));
}

TEST(GeneratorTest, Deterministic) {
  for (const char* spec : {"random:seed=3,dist=normal", "random:seed=9,dist=cascade", "random:seed=1,dist=haar",
                           "logsing:center=0.3/0.6", "power:exponent=0.8,center=0.5"}) {
    SCOPED_TRACE(spec);
    EXPECT_EQ(generate(parse_generator(spec), 2, 3), generate(parse_generator(spec), 2, 3));
  }
  EXPECT_NE(generate(RandomGen{1}, 1, 4), generate(RandomGen{2}, 1, 4));
}

TEST(GeneratorTest, ParseAndDescribeRoundTrip) {
  for (const char* spec : {"step01", "indicator:lo=0.25,hi=0.75,value=2", "checkerboard:period=3",
                           "random:seed=4,dist=uniform", "power:center=0.5/0.5,exponent=1.2,m=8"}) {
    SCOPED_TRACE(spec);
    const GeneratorSpec parsed = parse_generator(spec);
    EXPECT_EQ(generate(parse_generator(describe(parsed)), 2, 2), generate(parsed, 2, 2));
  }
  EXPECT_EQ(generate(parse_generator("step01"), 1, 2), GridFunction(1, 2, {0, 0, 1, 1}));
}

TEST(CsvTest, ParsesMinimalFile) {
  EXPECT_EQ(load_csv("dim=1,level=1\n0,1"), GridFunction(1, 1, {0, 1}));
}

TEST(CsvTest, CountMismatch) {
  try {
    load_csv("dim=1,level=2\n1,2,3\n");
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("cell count mismatch"), std::string::npos);
  }
}

TEST(CsvTest, MalformedInput) {
  EXPECT_THROW(load_csv("level=1\n0,1"), ValidationError);
  EXPECT_THROW(load_csv("dim=1,level=x\n0,1"), ValidationError);
  EXPECT_THROW(load_csv("dim=1,level=1\n0,abc"), ValidationError);
  EXPECT_THROW(load_csv("dim=1,level=1\n0,nan"), ValidationError);
  EXPECT_THROW(load_csv("dim=1,level=1\n0,inf"), ValidationError);
}

TEST(CsvTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 2;
    const GridFunction g = testing::random_grid(rng, dim, 3);
    const std::string text = store_csv(g);
    EXPECT_EQ(load_csv(text), g);
    EXPECT_EQ(store_csv(load_csv(text)), text);
  }
  const GridFunction tiny(1, 1, {5e-324, -1.7976931348623157e308});
  EXPECT_EQ(load_csv(store_csv(tiny)), tiny);
}

TEST(CsvTest, FileErrorsAreIoErrors) {
  EXPECT_THROW(read_csv_file("/nonexistent/dir/f.csv"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "oscnorm_gridfn_test.csv";
  const GridFunction g(2, 1, {1, 2, 3, 4});
  write_csv_file(g, path.string());
  EXPECT_EQ(read_csv_file(path.string()), g);
  std::filesystem::remove(path);
}

TEST(MeanTest, Examples) {
  EXPECT_DOUBLE_EQ(mean(GridFunction(1, 2, {0, 0, 1, 1})), 0.5);
  EXPECT_EQ(subtract_mean(generate(ConstantGen{7.25}, 2, 2)), generate(ConstantGen{0.0}, 2, 2));
  const GridFunction g(1, 2, {3, 1, 2, 0});
  EXPECT_DOUBLE_EQ(mean(g), 1.5);
  EXPECT_EQ(subtract_mean(g), GridFunction(1, 2, {1.5, -0.5, 0.5, -1.5}));
}

TEST(MeanTest, IntegralEqualsMeanAndCellSum) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const GridFunction g = testing::dyadic_grid(rng, 1 + trial % 2, 1 + trial % 4);
    double sum = 0.0;
    for (double v : g.cells()) sum += v;
    EXPECT_EQ(integral(g), sum * g.cell_measure());
    EXPECT_EQ(integral(g), mean(g));
  }
}

TEST(MeanTest, SubtractMeanIsIdempotentUpToOneRounding) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const GridFunction g = testing::random_grid(rng, 1 + trial % 2, 4);
    const GridFunction once = subtract_mean(g);
    const GridFunction twice = subtract_mean(once);
    const double m = std::abs(mean(once));
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(twice[i], once[i], m + 4 * std::numeric_limits<double>::epsilon() * std::abs(once[i]));
    }
  }
}

TEST(RefineTest, PreservesIntegralAndValues) {
  std::mt19937_64 rng(8);
  const GridFunction g = testing::dyadic_grid(rng, 2, 2);
  const GridFunction r = refine(g);
  EXPECT_EQ(r.level(), 3);
  EXPECT_EQ(integral(r), integral(g));
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto idx = r.cell_index(i);
    for (auto& c : idx) c /= 2;
    EXPECT_EQ(r[i], g[g.flat_index(idx)]);
  }
}

}  // namespace
}  // namespace oscnorm
