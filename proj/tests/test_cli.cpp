#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rglab/cli.hpp"

namespace fs = std::filesystem;
using rglab::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rglab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string make_file(const std::string& name, std::size_t size, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    rglab::Bytes b(size);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    rglab::write_file(dir_ / name, b);
    return (dir_ / name).string();
  }

  fs::path dir_;
};

TEST(Cli, RegionFigureOneJson) {
  const auto r = run({"region", "--n", "4", "--d", "3", "--l", "0", "--profile", "0,1/3,2/3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["mbr_point"], nlohmann::json::array({"8/15", "8/45"}));
  EXPECT_FALSE(j.contains("msr_point_annotation"));
}

TEST(Cli, RegionFigureTwoText) {
  const auto r = run({"region", "--n", "7", "--d", "6", "--l", "1", "--profile", "0,0,0,0,0,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("b5: beta >= 1/15\n"), std::string::npos);
  EXPECT_NE(r.out.find("b6: alpha + 29 beta >= 7/3\n"), std::string::npos);
}

TEST(Cli, RegionPresetAnnotatesOnlyFigureOne) {
  auto r = run({"region", "--preset", "fig1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["msr_point_annotation"], nlohmann::json::array({"7/18", "11/36"}));
  r = run({"region", "--preset", "fig2", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("series,alpha_bar,beta_bar,alpha_dec,beta_dec\n", 0), 0u);
  EXPECT_EQ(r.out.find("msr"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"region", "--n", "4", "--d", "3", "--l", "0", "--profile", "1"}).code, 2);
  EXPECT_EQ(run({"region", "--n", "4", "--d", "3", "--profile", "1/2,1/2,1/2"}).code, 2);
  EXPECT_EQ(run({"region", "--n", "4", "--d", "3", "--profile", "x,1,0"}).code, 2);
  EXPECT_EQ(run({"region", "--preset", "fig9"}).code, 2);
  EXPECT_EQ(run({"region", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "--preset", "nope"}).code, 2);
  EXPECT_EQ(run({"bounds", "--d", "3", "--profile", "0,0,1", "--family", "b9"}).code, 2);
}

TEST(Cli, NormalizeScalesProfile) {
  EXPECT_EQ(run({"region", "--n", "4", "--d", "3", "--profile", "0,1,2"}).code, 2);
  const auto r = run({"region", "--n", "4", "--d", "3", "--profile", "0,1,2", "--normalize"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mbr_point = (8/15, 8/45)"), std::string::npos);
}

TEST(Cli, BoundsListsApplicableFamilies) {
  auto r = run({"bounds", "--d", "3", "--l", "1", "--profile", "0,1/2,1/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "b3: beta >= 5/12\nb4: alpha + 5 beta >= 10/3\n");
  r = run({"bounds", "--d", "6", "--l", "1", "--profile", "0,0,0,0,0,1", "--family", "b6"});
  EXPECT_EQ(r.out, "b6: alpha + 29 beta >= 7/3\n");
}

TEST(Cli, VerifyPresets) {
  auto r = run({"verify", "--preset", "src-3221"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  r = run({"verify", "--preset", "mdcsr-4331", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["secrecy_index"], "0");
  r = run({"verify", "--n", "4", "--d", "3", "--l", "1", "--profile", "0,1/2,1/2"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, VerifyRefusesNonSymmetricalSpec) {
  const auto r = run({"verify", "--n", "5", "--d", "3", "--k", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("n = d + 1"), std::string::npos);
}

TEST(Cli, SecrecyCheckAndEntropyQuery) {
  auto r = run({"secrecy-check", "--preset", "src-4331"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("secrecy_index 0 => SECURE"), std::string::npos);
  r = run({"secrecy-check", "--n", "4", "--d", "3", "--k", "3", "--entropy", "W1", "--given", "S[2->1],S[3->1],S[4->1]"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("= 0"), std::string::npos);
  r = run({"secrecy-check", "--preset", "mbr-322", "--entropy", "W9"});
  EXPECT_EQ(r.code, 2);
  r = run({"secrecy-check", "--preset", "src-3221", "--entropy", "M2", "--given", "S[1->2],S[3->2]", "--format", "json"});
  EXPECT_EQ(nlohmann::json::parse(r.out)["entropy"], "1");
  r = run({"secrecy-check", "--n", "4", "--d", "3", "--k", "3", "--l", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("secrecy impossible"), std::string::npos);
}

TEST_F(CliFiles, RepairCycleSmallFile) {
  const auto in = make_file("in.bin", 1024);
  const auto r = run({"repair-cycle", "--n", "5", "--k", "3", "--d", "4", "--fail", "2", in});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("from all 10 subsets"), std::string::npos);
  EXPECT_EQ(run({"repair-cycle", "--n", "5", "--k", "3", "--d", "4", "--fail", "2", in}).out, r.out);
}

TEST_F(CliFiles, RepairCycleEmptyFile) {
  const auto in = make_file("empty.bin", 0);
  EXPECT_EQ(run({"repair-cycle", "--n", "5", "--k", "3", "--d", "4", in}).code, 0);
}

TEST_F(CliFiles, RepairCycleSecureAndMultilevel) {
  const auto in = make_file("in.bin", 777);
  EXPECT_EQ(run({"repair-cycle", "--preset", "src-4331", "--fail", "4", in}).code, 0);
  EXPECT_EQ(run({"repair-cycle", "--preset", "mdcsr-4331", "--fail", "3", "--seed", "9", in}).code, 0);
  EXPECT_EQ(run({"repair-cycle", "--n", "6", "--d", "4", "--l", "1", "--profile", "0,1/3,1/3,1/3", in}).code, 0);
}

TEST_F(CliFiles, RepairCycleDetectsCorruptHelper) {
  const auto in = make_file("in.bin", 1024);
  const auto r = run({"repair-cycle", "--n", "5", "--k", "3", "--d", "4", "--fail", "2", "--corrupt", "3:40", in});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("offset"), std::string::npos);
}

TEST_F(CliFiles, RepairCycleDetectsEveryHeaderByte) {
  const auto in = make_file("in.bin", 50);
  const auto out = (dir_ / "keep").string();
  ASSERT_EQ(run({"repair-cycle", "--preset", "mbr-322", "--out-dir", out, in}).code, 0);
  const auto size = fs::file_size(fs::path(out) / "node_2.rgl");
  for (std::size_t off = 0; off < size; ++off) {
    const auto r = run({"repair-cycle", "--preset", "mbr-322", "--corrupt", "2:" + std::to_string(off), in});
    ASSERT_EQ(r.code, 1) << "offset " << off;
  }
}

TEST_F(CliFiles, RepairCycleIoErrors) {
  EXPECT_EQ(run({"repair-cycle", "--preset", "mbr-322", (dir_ / "missing").string()}).code, 3);
  EXPECT_EQ(run({"encode", "--preset", "mbr-322", "--out-dir", (dir_ / "x").string(), (dir_ / "missing").string()}).code, 3);
}

TEST_F(CliFiles, EncodeWritesParsableShares) {
  const auto in = make_file("in.bin", 300);
  const auto out = dir_ / "shares";
  const auto r = run({"encode", "--n", "4", "--d", "3", "--k", "2", "--out-dir", out.string(), "--seed", "5", in});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int i = 1; i <= 4; ++i) {
    const auto f = rglab::parse_share_file(rglab::read_file(out / ("node_" + std::to_string(i) + ".rgl")));
    EXPECT_EQ(f.node, i);
    ASSERT_TRUE(f.trailer.has_value());
    EXPECT_EQ(f.trailer->seed, 5u);
    EXPECT_EQ(f.trailer->original_length, 300u);
  }
  EXPECT_EQ(run({"encode", "--preset", "mbr-322", in}).code, 2);  // needs --out-dir
}

}  // namespace
