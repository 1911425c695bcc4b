#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "symjunta/error.hpp"
#include "symjunta/learner.hpp"

using namespace symjunta;
using cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "symjunta");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("symjunta_test_" + name);
}

}  // namespace

TEST(Cli, MinOrderSingle) {
  const auto r = run({"min-order", "--k", "3", "--f", "0011"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(json_of(r)["min_order"], 1);
  EXPECT_EQ(run({"min-order", "--k", "3", "--f", "0011", "--format", "text"}).out, "1\n");
  EXPECT_EQ(run({"min-order", "--k", "4", "--f", "0011"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"min-order", "--k", "3"}).code, cli::kExitUsage);
}

TEST(Cli, MinOrderAll) {
  const auto r = run({"min-order", "--k", "3", "--all"});
  ASSERT_EQ(r.code, cli::kExitOk);
  const auto j = json_of(r);
  ASSERT_EQ(j["rows"].size(), 16u);
  int exceptional = 0;
  for (const auto& row : j["rows"]) exceptional += row["exceptional"].get<bool>();
  EXPECT_EQ(exceptional, 4);
  const auto csv = run({"min-order", "--k", "3", "--all", "--format", "csv"});
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 17);
  EXPECT_EQ(run({"min-order", "--k", "40", "--all"}).code, cli::kExitResource);
}

TEST(Cli, MinOrderShardsConcatenate) {
  const auto whole = run({"min-order", "--k", "6", "--all", "--format", "text"}).out;
  std::string joined;
  for (int i = 0; i < 4; ++i) {
    joined += run({"min-order", "--k", "6", "--all", "--format", "text", "--shard-count", "4", "--shard-index",
                   std::to_string(i)})
                  .out;
  }
  EXPECT_EQ(joined, whole);
}

TEST(Cli, EnumerationCapOverride) {
  ::setenv(cli::kEnumCapVariable, "5", 1);
  EXPECT_EQ(run({"min-order", "--k", "6", "--all"}).code, cli::kExitResource);
  ::setenv(cli::kEnumCapVariable, "abc", 1);
  EXPECT_EQ(run({"min-order", "--k", "6", "--all"}).code, cli::kExitUsage);
  ::unsetenv(cli::kEnumCapVariable);
  EXPECT_EQ(run({"min-order", "--k", "6", "--all"}).code, cli::kExitOk);
}

TEST(Cli, VerifyExitCodes) {
  const auto ok = run({"verify", "--k-min", "2", "--k-max", "14", "--bound", "2k/3"});
  ASSERT_EQ(ok.code, cli::kExitOk) << ok.err;
  const auto j = json_of(ok);
  EXPECT_EQ(j["reports"].size(), 13u);
  EXPECT_TRUE(j["verified"].get<bool>());

  const auto bad = run({"verify", "--k-min", "2", "--k-max", "14", "--bound", "0"});
  EXPECT_EQ(bad.code, cli::kExitCounterexample);
  EXPECT_FALSE(json_of(bad)["reports"][0]["counterexamples"].empty());

  EXPECT_EQ(run({"verify", "--bound", "2k/"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--bound", "k^2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--k-min", "5", "--k-max", "9", "--bound", "2*k/ln(k)"}).code, cli::kExitOk);
}

TEST(Cli, BoundExpressions) {
  EXPECT_EQ(cli::evaluate_bound("2k/3", 14), 9);
  EXPECT_EQ(cli::evaluate_bound("2*k/3", 14), 9);
  EXPECT_EQ(cli::evaluate_bound("3k/31", 22), 2);
  EXPECT_EQ(cli::evaluate_bound("k", 7), 7);
  EXPECT_EQ(cli::evaluate_bound("0", 7), 0);
  EXPECT_EQ(cli::evaluate_bound("1.5*k/ln(k)", 20), 10);  // 30 / 2.9957 = 10.01
  EXPECT_EQ(cli::evaluate_bound(" 0.5 * k ", 9), 4);
  EXPECT_THROW(cli::evaluate_bound("k/0", 9), Error);
  EXPECT_THROW(cli::evaluate_bound("2k/3k", 9), Error);
}

TEST(Cli, LearnPlantedAndConfig) {
  const auto inst = plant_instance(16, 3, SymmetricFunction::parse("0011"), 7);
  const auto r = run({"learn", "--n", "16", "--k", "3", "--core", "0011", "--seed", "7"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["core"], "0011");
  EXPECT_EQ(j["relevant"].get<std::vector<int>>(), inst.relevant);

  const auto cfg = temp_file("config.json");
  std::ofstream(cfg) << R"({"n":16,"k":3,"core":"0011","seed":7})";
  const auto r2 = run({"learn", "--config", cfg.string()});
  EXPECT_EQ(r2.out, r.out);
  std::filesystem::remove(cfg);
}

TEST(Cli, LearnDatasetAndParseErrors) {
  const auto data = temp_file("data.txt");
  const auto s = run({"sample", "--n", "6", "--k", "2", "--core", "011", "--seed", "4", "--exhaustive", "--output",
                      data.string()});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  const auto inst = plant_instance(6, 2, SymmetricFunction::parse("011"), 4);
  const auto r = run({"learn", "--dataset", data.string(), "--k", "2"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(json_of(r)["relevant"].get<std::vector<int>>(), inst.relevant);
  EXPECT_EQ(json_of(r)["core"], "011");

  std::ofstream(data) << "010101 1\n0101 0\n";
  const auto bad = run({"learn", "--dataset", data.string(), "--k", "2"});
  EXPECT_EQ(bad.code, cli::kExitUsage);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
  std::filesystem::remove(data);
  EXPECT_EQ(run({"learn", "--k", "2"}).code, cli::kExitUsage);
}

TEST(Cli, NumberTheoryAndMoments) {
  const auto p = run({"primes", "--lo", "10", "--hi", "20"});
  EXPECT_EQ(json_of(p)["primes"], nlohmann::json::array({11, 13, 17, 19}));
  EXPECT_EQ(run({"primes", "--lo", "10", "--hi", "20", "--format", "text"}).out, "11 13 17 19\n");
  EXPECT_EQ(json_of(run({"primes", "--lo", "2", "--hi", "30", "--modulus", "4", "--residue", "1"}))["count"], 4);
  EXPECT_EQ(run({"primes", "--lo", "2", "--hi", "30", "--modulus", "4", "--residue", "2"}).code, cli::kExitUsage);

  const auto l = run({"lucas", "--m", "2", "--l", "1", "--r", "5"});
  EXPECT_EQ(l.code, cli::kExitOk);
  EXPECT_EQ(json_of(l)["lifted"], 2);
  EXPECT_EQ(run({"lucas", "--m", "2", "--l", "1", "--r", "6"}).code, cli::kExitUsage);

  EXPECT_EQ(json_of(run({"moments", "--f", "0101", "--r", "2"}))["matched_up_to"], 2);

  const auto c = json_of(run({"certificate", "--N", "100", "--k", "400"}));
  EXPECT_EQ(c["q"], 101);
  EXPECT_EQ(c["r"], 103);
  EXPECT_EQ(c["M"], 2);
  EXPECT_EQ(run({"certificate", "--N", "100", "--k", "105"}).code, cli::kExitDiagnostic);

  const auto sp = json_of(run({"spectrum", "--f", "0011"}));
  EXPECT_EQ(sp["levels"], nlohmann::json::array({4, -2, 0, 2}));
}

TEST(Cli, OutputIsByteReproducible) {
  const std::vector<std::string> args{"verify", "--k-min", "3", "--k-max", "9"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> learn{"learn", "--n", "20", "--k", "4", "--core", "01101", "--seed", "9"};
  EXPECT_EQ(run(learn).out, run(learn).out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"nonsense"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"min-order", "--k", "3", "--f", "0011", "--format", "xml"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}
