#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oscnorm_cli/cli.hpp"

namespace oscnorm::cli {
namespace {

using Json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("oscnorm_cli_" + name);
}

TEST(CliTest, NormsExample) {
  const Result r = invoke({"norms", "--gen", "step01", "--dim", "1", "--level", "2", "--p", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_DOUBLE_EQ(j["norms"]["jn"]["value"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["norms"]["garo"]["value"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["norms"]["bbm"]["value"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(j["norms"]["weak_lp"]["value"].get<double>(), std::sqrt(0.5));
  EXPECT_NEAR(j["norms"]["lorentz"]["value"].get<double>(), std::sqrt(0.75), 1e-10);
}

TEST(CliTest, NormsWithWitnessesAndSweep) {
  const Result r = invoke({"norms", "--gen", "random:seed=2,dist=normal", "--dim", "2", "--level", "3", "--p", "3",
                           "--front-mode", "sweep", "--sweep-count", "16", "--witnesses"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["norms"]["garo"]["mode"], "dyadic/lambda_sweep");
  EXPECT_EQ(j["norms"]["garo"]["front"].size(), j["norms"]["garo"]["front_points"].get<std::size_t>());
}

TEST(CliTest, VerifyWritesReport) {
  const auto path = temp_path("verify.json");
  std::filesystem::remove(path);
  const Result r = invoke({"verify", "--seed", "0", "--dims", "1,2", "--levels", "3..6", "-o", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err << r.out;
  ASSERT_TRUE(std::filesystem::exists(path));
  std::ifstream in(path);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_FALSE(j["reports"].empty());
  std::filesystem::remove(path);
}

TEST(CliTest, OracleExample) {
  const Result r = invoke({"oracle", "--dim", "1", "--max-level", "3", "--trials", "100", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(Json::parse(r.out)["passed"].get<bool>());
}

TEST(CliTest, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {}, {"frobnicate"}, {"norms", "--p"}, {"oracle", "--dim", "3"}, {"rearrange", "--format", "xml"}}) {
    const Result r = invoke(args);
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_EQ(r.err.rfind("usage error:", 0), 0u) << r.err;
  }
}

TEST(CliTest, FileErrors) {
  const Result r = invoke({"norms", "--input", "/nonexistent/grid.csv"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind("file error:", 0), 0u) << r.err;
}

TEST(CliTest, InvalidInput) {
  const auto path = temp_path("bad.csv");
  {
    std::ofstream f(path);
    f << "dim=1,level=2\n1,2,3\n";
  }
  Result r = invoke({"norms", "--input", path.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind("invalid input:", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("cell count mismatch"), std::string::npos);
  std::filesystem::remove(path);

  r = invoke({"norms", "--gen", "power:exponent=2", "--dim", "1", "--level", "2"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind("invalid input:", 0), 0u) << r.err;

  r = invoke({"norms", "--gen", "step01", "--dim", "1", "--level", "2", "--p", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind("invalid input:", 0), 0u) << r.err;
}

TEST(CliTest, GenThenRearrange) {
  const auto path = temp_path("gen.csv");
  Result r = invoke({"gen", "--gen", "indicator:lo=0.5,hi=1", "--dim", "1", "--level", "2", "-o", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  r = invoke({"rearrange", "--input", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "breakpoint,value\n0,1\n0.5,0\n1,0\n");
  r = invoke({"rearrange", "--input", path.string(), "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["steps"].size(), 2u);
  std::filesystem::remove(path);

  r = invoke({"gen", "--gen", "step01", "--dim", "1", "--level", "1"});
  EXPECT_EQ(r.out, "dim=1,level=1\n0,1\n");
}

TEST(CliTest, SobolevCommand) {
  const Result r = invoke({"sobolev", "--gen", "step01", "--dim", "1", "--level", "1", "--alpha", "0.5", "--p", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["seminorm"].get<double>(), std::sqrt(2.0));
}

TEST(CliTest, OutputIsByteIdenticalOnRepeat) {
  const std::vector<std::string> norms{"norms", "--gen", "random:seed=5,dist=cascade", "--dim", "2", "--level", "4"};
  EXPECT_EQ(invoke(norms).out, invoke(norms).out);
  const std::vector<std::string> verify{"verify", "--seed", "3", "--dims", "1", "--levels", "3,4"};
  const Result a = invoke(verify);
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, invoke(verify).out);
}

}  // namespace
}  // namespace oscnorm::cli
