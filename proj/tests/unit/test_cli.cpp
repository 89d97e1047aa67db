#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "json.hpp"
#include "tori/catalog.hpp"

using json = nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  std::string cmd = std::string(TORI_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args, int expect_code) {
  CliRun r = run(args + " --json");
  EXPECT_EQ(r.code, expect_code) << args;
  return json::parse(r.out);
}

// Required keys, closed top level, enum and const values from the shipped schema.
void check_schema(const json& report) {
  std::ifstream in(TORI_SCHEMA);
  json schema = json::parse(in);
  for (const auto& k : schema["required"]) EXPECT_TRUE(report.contains(k.get<std::string>())) << k;
  for (const auto& [k, v] : report.items()) EXPECT_TRUE(schema["properties"].contains(k)) << k;
  EXPECT_EQ(report["tool"], schema["properties"]["tool"]["const"]);
  const auto& codes = schema["properties"]["exit_code"]["enum"];
  EXPECT_NE(std::find(codes.begin(), codes.end(), report["exit_code"]), codes.end());
  EXPECT_TRUE(report["timing"]["seconds"].is_number());
}

void check_verdict_schema(const json& v) {
  std::ifstream in(TORI_SCHEMA);
  json def = json::parse(in)["$defs"]["verdict"];
  for (const auto& k : def["required"]) EXPECT_TRUE(v.contains(k.get<std::string>())) << k;
  const auto& levels = def["properties"]["level"]["enum"];
  EXPECT_NE(std::find(levels.begin(), levels.end(), v["level"]), levels.end());
}

}  // namespace

TEST(Cli, ClassifyDade48) {
  json r = run_json("classify --group dade-4-8", 0);
  check_schema(r);
  check_verdict_schema(r["result"]);
  EXPECT_EQ(r["result"]["level"], "HereditarilyRational");
  EXPECT_TRUE(r["result"]["verified"].get<bool>());
}

TEST(Cli, CensusDimTwo) {
  json r = run_json("census --dim 2", 0);
  check_schema(r);
  EXPECT_EQ(r["result"]["count"], 13);
  EXPECT_TRUE(r["result"]["undecided_pairs"].empty());
}

TEST(Cli, VerifyPaperObstructionCase) {
  json r = run_json("verify-paper --case 4-33-2-1", 0);
  check_schema(r);
  ASSERT_EQ(r["result"]["cases"].size(), 1u);
  const json& c = r["result"]["cases"][0];
  EXPECT_TRUE(c["pass"].get<bool>());
  bool verdict = false, relations = false;
  for (const auto& chk : c["checks"]) {
    std::string d = chk.value("detail", "");
    verdict |= d == "RetractRational, stable no";
    relations |= chk["check"].get<std::string>().find("relations") != std::string::npos && !d.empty();
  }
  EXPECT_TRUE(verdict);
  EXPECT_TRUE(relations);
}

TEST(Cli, NormOne) {
  // a = (12), b = (12345); three adjacent transpositions generate S4.
  json r = run_json("norm-one --group \"[4,31,4,2]\" --stabilizer \"gens:[a, b^-1*a*b, b^-2*a*b^2]\"", 0);
  check_verdict_schema(r["result"]);
  EXPECT_EQ(r["result"]["degree"], 5);
  EXPECT_EQ(r["result"]["level"], "RetractRational");
  EXPECT_EQ(r["result"]["stable"], "no");
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run("classify --group no-such-group").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("census --dim 7").code, 2);
  EXPECT_EQ(run("verify-paper --case nothing").code, 2);
  json r = run_json("classify --group dade-4-8 --lattice \"dual(\"", 2);
  check_schema(r);
  EXPECT_EQ(r["result"]["offset"], 5);
}

TEST(Cli, DeterministicModuloTiming) {
  json a = run_json("classify --group \"[4,33,2,1]\"", 0);
  json b = run_json("classify --group \"[4,33,2,1]\"", 0);
  a.erase("timing");
  b.erase("timing");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, CatalogValidate) {
  const std::string good = testing::TempDir() + "tori_good_catalog.json";
  const std::string bad = testing::TempDir() + "tori_bad_catalog.json";
  std::ofstream(good) << tori::catalog_to_json(tori::builtin_catalog());
  std::ofstream(bad) << R"([{"name": "x", "rank": 2, "generators": [[[2, 0], [0, 1]]]}])";
  EXPECT_EQ(run("catalog validate " + good).code, 0);
  json r = run_json("catalog validate " + bad, 2);
  EXPECT_FALSE(r["result"]["valid"].get<bool>());
  EXPECT_FALSE(r["result"]["problems"].empty());
}

TEST(Cli, TextOutput) {
  CliRun r = run("group show \"[4,33,2,1]\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("order: 24"), std::string::npos);
  EXPECT_NE(r.out.find("center_order: 4"), std::string::npos);
}
