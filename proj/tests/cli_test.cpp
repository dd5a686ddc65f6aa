#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "secrd/commands.hpp"

using namespace secrd;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& command, const json& doc) {
  std::ostringstream out, err;
  const int code = run_command(command, doc, {out, err});
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::path(testing::TempDir()) / "secrd_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(ConfigTest, NegativeCellIsNamed) {
  const auto r = run("rd", {{"source", {0.5, 0.5}}, {"d_l", {{0, 1}, {1, -2}}}});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("d_l[1][1] is negative"), std::string::npos) << r.err;
}

TEST(ConfigTest, DistortionBelowLegitimateLevel) {
  const auto r = run("exponents", {{"source", {0.5, 0.5}}, {"d_l", "hamming"}, {"d_c", 0.2}, {"distortion", 0.1}});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("below d_c"), std::string::npos);
}

TEST(ConfigTest, LeniencyViolationPrintsWitness) {
  const auto r = run("rd", {{"source", {0.5, 0.5}}, {"d_l", {{0, 1}, {1, 0}}}, {"d_e", {{0, 2}, {2, 0}}}});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("w=0"), std::string::npos) << r.err;
}

TEST(ConfigTest, UnknownKeyAndPreset) {
  EXPECT_EQ(run("rd", {{"source", {0.5, 0.5}}, {"d_l", "hamming"}, {"colour", 1}}).code, 1);
  EXPECT_EQ(run("rd", {{"preset", "nope"}}).code, 1);
  EXPECT_EQ(run("dance", {{"preset", "theorem"}}).code, 1);
}

TEST(ConfigTest, StochasticCommandsNeedSeed) {
  for (const char* cmd : {"build-code", "simulate", "theorem"}) {
    json doc{{"preset", "theorem"}, {"out", scratch("noseed").string()}};
    if (std::string(cmd) == "build-code") doc["n"] = 8;
    const auto r = run(cmd, doc);
    EXPECT_EQ(r.code, 1) << cmd;
    EXPECT_NE(r.err.find("needs a seed"), std::string::npos) << cmd;
  }
  EXPECT_EQ(run("attack", {{"preset", "theorem"}}).code, 1);
  EXPECT_EQ(run("attack", {{"preset", "xor1bit"}}).code, 0);
}

TEST(RdCommandTest, BinaryCurveMatchesClosedForm) {
  const auto r = run("rd", {{"source", {0.5, 0.5}}, {"d_l", "hamming"}, {"points", 6}});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"distortion", "rate_bits", "tol"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = std::stod(rows[i][0]);
    EXPECT_NEAR(std::stod(rows[i][1]), std::max(0.0, 1.0 - binary_entropy(d)), 2e-6) << d;
  }
}

TEST(RdCommandTest, TwoPointsAreEndpoints) {
  const auto r = run("rd", {{"source", {0.25, 0.75}}, {"d_l", "hamming"}, {"points", 2}});
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "0.000000");
  EXPECT_EQ(rows[2][0], "0.250000");
}

TEST(ExponentsCommandTest, PerfectSecrecyListAndEmptyMarton) {
  const auto r = run("exponents", {{"source", {0.5, 0.5}},
                                   {"d_l", "hamming"},
                                   {"distortion", {0.05, 0.1, 0.2, 0.3}},
                                   {"key_rate", {0.25}},
                                   {"r_c", 1.0}});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  const auto& rows = j["perfect_secrecy"];
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(rows[1]["value"].get<double>(), 0.5310, 2e-3);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i]["value"].get<double>(), rows[i - 1]["value"].get<double>());
  EXPECT_EQ(j["marton"]["value"], "inf");
  EXPECT_EQ(j["theorem"][0]["value"].get<double>(), 0.25);
}

TEST(AttackCommandTest, XorPresetIsHalf) {
  const auto r = run("attack", {{"preset", "xor1bit"}});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u + 4 * 4 * 2);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][4], "5.00000e-01");
}

TEST(TheoremCommandTest, VerdictAndExitCodes) {
  const auto pass = run("theorem", {{"preset", "theorem"}, {"seed", 1}});
  EXPECT_EQ(pass.code, 0) << pass.err;
  EXPECT_NE(pass.err.find("PASS"), std::string::npos);
  // The blind guess alone decays far faster than the key rate.
  const auto fail = run("theorem", {{"preset", "theorem"}, {"seed", 1}, {"strategies", {"blind"}}});
  EXPECT_EQ(fail.code, 2) << fail.err;
  EXPECT_NE(fail.err.find("FAIL"), std::string::npos);
  EXPECT_EQ(run("theorem", {{"preset", "xor1bit"}, {"seed", 1}}).code, 1);
}

TEST(BuildCodeCommandTest, RefusalNamesRequiredCap) {
  const auto r = run("build-code", {{"preset", "theorem"}, {"n", 30}, {"seed", 1}, {"out", scratch("big").string()}});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("required cap"), std::string::npos) << r.err;
}

TEST(BuildCodeCommandTest, LogReportsCoverAgainstTarget) {
  const auto r = run("build-code", {{"preset", "theorem"}, {"n", 8}, {"seed", 1}, {"out", scratch("log").string()}});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("d-cover size"), std::string::npos);
  EXPECT_NE(r.out.find("target n(E0"), std::string::npos);
  EXPECT_EQ(slurp(scratch("log.log")), r.out);
}

TEST(DeterminismTest, BuildCodeAndSimulateAreByteIdentical) {
  for (const json& extra : {json{{"n", 10}}, json{{"n", 19}, {"grid", {{"n0", 4}, {"epsilon", 0.5}}}, {"r_c", 0.3}}}) {
    json doc{{"preset", "theorem"}, {"seed", 21}};
    doc.update(extra);
    doc["out"] = scratch("a").string();
    ASSERT_EQ(run("build-code", doc).code, 0);
    doc["out"] = scratch("b").string();
    doc["threads"] = 1;
    ASSERT_EQ(run("build-code", doc).code, 0);
    EXPECT_EQ(slurp(scratch("a.bin")), slurp(scratch("b.bin")));
  }
  json sim{{"preset", "theorem"}, {"seed", 21}, {"mc_trials", 2000}, {"threads", 3}};
  sim["out"] = scratch("s1").string();
  ASSERT_EQ(run("simulate", sim).code, 0);
  sim["out"] = scratch("s2").string();
  sim["threads"] = 1;
  ASSERT_EQ(run("simulate", sim).code, 0);
  EXPECT_EQ(slurp(scratch("s1.json")), slurp(scratch("s2.json")));
  EXPECT_EQ(slurp(scratch("s1.csv")), slurp(scratch("s2.csv")));
  EXPECT_NE(slurp(scratch("s1.csv")).find("seed=21"), std::string::npos);
}
