#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "golden.hpp"
#include "regowl/vocab.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(REGOWL_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string q(const std::string& s) { return "'" + s + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("regowl_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& content) const { std::ofstream(dir_ / name) << content; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndUsage) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("compile " + q(golden::fixture("example1.tsv")) + " --subject-default maybe").code, 2);
}

TEST_F(Cli, ValidateExitCodes) {
  EXPECT_EQ(run("validate " + q(golden::fixture("example1.tsv"))).code, 0);
  auto bad = run("validate " + q(golden::fixture("arrow_rules/range_property_fail_end.tsv")));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("BAD_RANGE_END"), std::string::npos);
  auto json = run("validate --json " + q(golden::fixture("arrow_rules/range_property_fail_end.tsv")));
  EXPECT_EQ(json.code, 1);
  EXPECT_NE(json.out.find("\"code\": \"BAD_RANGE_END\""), std::string::npos);
  EXPECT_EQ(run("validate " + q(path("missing.tsv"))).code, 2);
  EXPECT_EQ(run("validate " + q(golden::fixture("bad/index_gap.tsv"))).code, 2);
}

TEST_F(Cli, CompileWritesOmn) {
  auto r = run("compile " + q(golden::fixture("example2.tsv")) + " -o " + q(path("e2.omn")));
  EXPECT_EQ(r.code, 0);
  auto text = regowl::vocab::read_file(path("e2.omn"));
  EXPECT_NE(text.find("height only xsd:float[>= 3.0f]"), std::string::npos);
}

TEST_F(Cli, FailedCompileLeavesNoOutput) {
  auto r = run("compile " + q(golden::fixture("arrow_rules/to_fail_end.tsv")) + " -o " + q(path("bad.omn")));
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(path("bad.omn")));
  EXPECT_FALSE(fs::exists(path("bad.omn.tmp")));
}

TEST_F(Cli, BatchCompile) {
  fs::create_directories(dir_ / "in");
  fs::copy_file(golden::fixture("example1.tsv"), dir_ / "in" / "a.tsv");
  fs::copy_file(golden::fixture("example2.tsv"), dir_ / "in" / "b.tsv");
  EXPECT_EQ(run("compile " + q(path("in"))).code, 2);  // needs -o
  EXPECT_EQ(run("compile " + q(path("in")) + " -o " + q(path("out"))).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "a.omn"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "b.omn"));
}

TEST_F(Cli, CheckScenario) {
  ASSERT_EQ(run("compile " + q(golden::fixture("example1.tsv")) + " --subject-default only -o " + q(path("e1.omn"))).code,
            0);
  auto ok = run("check " + q(path("e1.omn")) + " " + q(golden::fixture("listings_abox.omn")));
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("consistent: true"), std::string::npos);
  EXPECT_NE(ok.out.find("classifications: 4"), std::string::npos) << ok.out;

  std::string abox = regowl::vocab::read_file(golden::fixture("listings_abox.omn"));
  abox.replace(abox.find("\"R 15\""), 6, "\"R14\"");
  write("r14.omn", abox);
  auto bad = run("check " + q(path("e1.omn")) + " " + q(path("r14.omn")));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("violations: 1"), std::string::npos);
  EXPECT_NE(bad.out.find("FIREPROTECTION \"R14\"^^xsd:string"), std::string::npos) << bad.out;

  auto json = run("check --json " + q(path("e1.omn")) + " " + q(path("r14.omn")));
  EXPECT_EQ(json.code, 1);
  EXPECT_NE(json.out.find("\"consistent\": false"), std::string::npos);
}

TEST_F(Cli, CheckOpenPropertyAndClose) {
  ASSERT_EQ(run("compile " + q(golden::fixture("example1.tsv")) + " -o " + q(path("e1.omn"))).code, 0);
  write("open.omn", "Individual: b\n    Types:\n        BEAM\n    Facts:\n        in x\n");
  EXPECT_EQ(run("check " + q(path("e1.omn")) + " " + q(path("open.omn"))).code, 2);
  EXPECT_EQ(run("check --close " + q(path("e1.omn")) + " " + q(path("open.omn"))).code, 0);
  EXPECT_EQ(run("check " + q(path("e1.omn")) + " " + q(path("nope.omn"))).code, 2);
}
