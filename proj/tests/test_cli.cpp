#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "report.hpp"
#include "test_support.hpp"

namespace gridclear::cli {
namespace {

using testing_support::data_path;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "gridclear");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gridclear_test_" + name)).string();
}

TEST(Clear, TwoBusReportShowsUniformPrice) {
  const CliRun r = run({"clear", data_path("two_bus.json"), "--no-timestamp"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["status"], "optimal");
  EXPECT_EQ(doc["result"]["duals"]["lambda"]["1"], 20);
  EXPECT_EQ(doc["result"]["duals"]["lambda"]["2"], 20);
  EXPECT_EQ(doc["input"]["digest"]["nodes"], 2);
  EXPECT_FALSE(doc.contains("generated_at"));
  EXPECT_FALSE(doc["solver"].contains("wall_time_ms"));
}

TEST(Clear, TimestampPresentByDefault) {
  const auto doc = nlohmann::json::parse(run({"clear", data_path("two_bus.json")}).out);
  EXPECT_TRUE(doc.contains("generated_at"));
  EXPECT_TRUE(doc["solver"].contains("wall_time_ms"));
}

TEST(Clear, OversubscribedExitsTwoWithCertificate) {
  const CliRun r = run({"clear", data_path("oversubscribed.json"), "--no-timestamp"});
  EXPECT_EQ(r.code, kExitNotOptimal);
  EXPECT_NE(r.err.find("demand exceeds deliverable capacity"), std::string::npos);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["status"], "infeasible");
  EXPECT_FALSE(doc["certificate"].empty());
}

TEST(Clear, CorruptedOrMissingInputExitsOne) {
  CliRun r = run({"clear", data_path("corrupted.json")});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("corrupted.json: document: invalid JSON"), std::string::npos) << r.err;
  r = run({"clear", data_path("missing.json")});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({"clear", data_path("two_bus.json"), "--model", "nodal"});
  EXPECT_EQ(r.code, kExitInputError);
}

TEST(Clear, EnhancedWithEmptyCriticalSetsMatchesStandard) {
  const auto a = nlohmann::json::parse(run({"clear", data_path("three_bus.json"), "--no-timestamp"}).out);
  const auto b = nlohmann::json::parse(
      run({"clear", data_path("three_bus.json"), "--no-timestamp", "--model", "enhanced"}).out);
  EXPECT_EQ(a["result"].dump(), b["result"].dump());
  EXPECT_EQ(a["prices"].dump(), b["prices"].dump());
  EXPECT_EQ(a["settlement"].dump(), b["settlement"].dump());
}

TEST(Clear, OutputIsDeterministicAcrossJobs) {
  const std::vector<std::string> cases = {data_path("two_bus.json"), data_path("three_bus.json"),
                                          data_path("three_bus_emergency.json"), data_path("oversubscribed.json")};
  std::vector<std::string> args = {"clear", "--no-timestamp", "--model", "enhanced"};
  args.insert(args.end(), cases.begin(), cases.end());
  const CliRun serial = run(args);
  args.push_back("--jobs");
  args.push_back("4");
  const CliRun parallel = run(args);
  EXPECT_EQ(serial.code, kExitNotOptimal);
  EXPECT_EQ(serial.out, parallel.out);
  EXPECT_EQ(serial.err, parallel.err);
  EXPECT_EQ(nlohmann::json::parse(serial.out).size(), 4u);
}

TEST(Clear, CsvUsesSymbolHeadersAndWritesFile) {
  const std::string path = temp_file("report.csv");
  const CliRun r = run({"clear", data_path("three_bus_emergency.json"), "--model", "enhanced", "--format", "csv",
                     "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string csv = testing_support::read_file(path);
  EXPECT_NE(csv.find("node,dispatch,demand,alpha,delta,congestion_pre,congestion_post,lambda,caiso_lambda"),
            std::string::npos);
  EXPECT_NE(csv.find("branch,flow,rate_a,f_minus,f_plus"), std::string::npos);
  EXPECT_NE(csv.find("branch,contingency,flow,rate_c,fc_minus,fc_plus\n2-3,1,-30,30,60,0"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Audit, GoldenStandardPasses) {
  const CliRun r = run({"audit", data_path("three_bus.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("PASS money_balance  lhs 1500.000000  rhs 1500.000000"), std::string::npos) << r.out;
}

TEST(Audit, LmpOnlyFlagsResidualWithDecomposition) {
  const CliRun r = run({"audit", data_path("three_bus_emergency.json"), "--model", "enhanced", "--scheme", "lmp_only"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("iso_residual -600.000000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("node 1: extra_term_rate * P = -600.000000"), std::string::npos);
  EXPECT_NE(r.out.find("unexplained 0"), std::string::npos);
}

TEST(Audit, CorruptedCaseExitsOne) {
  EXPECT_EQ(run({"audit", data_path("corrupted.json")}).code, kExitInputError);
}

TEST(Audit, CaisoOnStandardModelIsAnInputError) {
  const CliRun r = run({"audit", data_path("three_bus.json"), "--scheme", "caiso"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("only to enhanced-model results"), std::string::npos);
}

TEST(Audit, ToleranceFromEnvironment) {
  setenv("GRIDCLEAR_TOL", "1e-9", 1);
  CliRun r = run({"audit", data_path("three_bus.json")});
  EXPECT_NE(r.out.find("tolerance 1e-09"), std::string::npos);
  setenv("GRIDCLEAR_TOL", "-1", 1);
  r = run({"audit", data_path("three_bus.json")});
  EXPECT_EQ(r.code, kExitInputError);
  unsetenv("GRIDCLEAR_TOL");
}

TEST(Compare, EmptyCriticalSetsAreIdentical) {
  const CliRun r = run({"compare", data_path("three_bus.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("models identical"), std::string::npos);
}

TEST(Compare, BindingEmergencyShowsShift) {
  const CliRun r = run({"compare", data_path("three_bus_emergency.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("models differ"), std::string::npos);
  EXPECT_NE(r.out.find("-30.000000"), std::string::npos);  // dispatch shift at node 1
}

TEST(Generate, SeedIsReproducibleAndLoadable) {
  const CliRun a = run({"generate", "--seed", "7"});
  const CliRun b = run({"generate", "--seed", "7"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NO_THROW(load_case(a.out));
  EXPECT_EQ(run({"generate"}).code, kExitInputError);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1500.0), "1500");
}

}  // namespace
}  // namespace gridclear::cli
