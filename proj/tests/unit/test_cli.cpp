#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ovi/cli.hpp"
#include "ovi/instance.hpp"

using namespace ovi;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "ovi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ovi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenBuildQueryVerify) {
  ASSERT_EQ(run({"gen", "random", "-n", "256", "-d", "16", "--seed", "7", "-o", path("a.ovi")}).code, 0);
  EXPECT_EQ(read_instance(path("a.ovi")).n(), 256u);

  const CliRun b = run({"build", "tlqg", "-i", path("a.ovi"), "--plan", "auto", "-o", path("a.tlqg")});
  ASSERT_EQ(b.code, 0) << b.err;

  const CliRun q = run({"query", "-x", path("a.tlqg"), "-q", "0000000000000001"});
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_TRUE(q.out == "1\n" || q.out == "0\n");

  const CliRun z = run({"query", "-x", path("a.tlqg"), "-q", "0000000000000000"});
  EXPECT_EQ(z.out, "1\n");

  EXPECT_EQ(run({"query", "-x", path("a.tlqg"), "-q", "0101"}).code, 1);

  const CliRun v = run({"verify", "-x", path("a.tlqg"), "-i", path("a.ovi"), "--all"});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("65536 queries"), std::string::npos);

  EXPECT_EQ(run({"verify", "-x", path("a.tlqg"), "-i", path("a.ovi"), "--random", "500", "--threads", "3"}).code, 0);
}

TEST_F(CliTest, BatchStatsAndReport) {
  ASSERT_EQ(run({"gen", "random", "-n", "64", "-d", "12", "--seed", "2", "-o", path("a.ovi")}).code, 0);
  ASSERT_EQ(run({"gen", "random", "-n", "20", "-d", "12", "--seed", "3", "-o", path("q.ovi")}).code, 0);
  ASSERT_EQ(run({"build", "tlqg_report", "-i", path("a.ovi"), "-o", path("a.idx")}).code, 0);
  const CliRun r = run({"query", "-x", path("a.idx"), "--batch", path("q.ovi"), "--report", "--stats", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int answers = 0;
  while (std::getline(lines, line) && (line[0] == '0' || line[0] == '1')) ++answers;
  EXPECT_EQ(answers, 20);
  EXPECT_NE(r.out.find("nodes_visited"), std::string::npos);
  EXPECT_EQ(run({"verify", "-x", path("a.idx"), "-i", path("a.ovi"), "--all", "--report"}).code, 0);
}

TEST_F(CliTest, DigestAndCorruption) {
  ASSERT_EQ(run({"gen", "random", "-n", "64", "-d", "12", "--seed", "2", "-o", path("a.ovi")}).code, 0);
  ASSERT_EQ(run({"gen", "random", "-n", "64", "-d", "12", "--seed", "9", "-o", path("b.ovi")}).code, 0);
  ASSERT_EQ(run({"build", "lookup", "-i", path("a.ovi"), "-o", path("a.idx")}).code, 0);
  EXPECT_EQ(run({"query", "-x", path("a.idx"), "-i", path("b.ovi"), "-q", "000000000000"}).code, 2);

  // Flip bits deep in the lookup bitmap.
  std::string bytes;
  {
    std::ifstream in(path("a.idx"), std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  for (std::size_t i = bytes.size() - 200; i < bytes.size() - 8; ++i) bytes[i] = static_cast<char>(~bytes[i]);
  {
    std::ofstream o(path("bad.idx"), std::ios::binary);
    o << bytes;
  }
  const CliRun v = run({"verify", "-x", path("bad.idx"), "-i", path("a.ovi"), "--all"});
  EXPECT_EQ(v.code, 3);
  EXPECT_NE(v.out.find("mismatch q="), std::string::npos);
}

TEST_F(CliTest, AdversarialAndGuard) {
  EXPECT_EQ(run({"gen", "adversarial", "-n", "100", "--block-bits", "6", "--blocks", "3", "-o", path("x.ovi")}).code, 1);
  ASSERT_EQ(run({"gen", "adversarial", "-n", "65536", "--block-bits", "8", "--blocks", "3", "-o", path("b.ovi")}).code, 0);
  const CliRun r = run({"build", "random_opt", "-i", path("b.ovi"), "-o", path("b.idx")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("guard"), std::string::npos);
}

TEST_F(CliTest, BuildOverridesAndPlan) {
  ASSERT_EQ(run({"gen", "random", "-n", "1024", "-d", "24", "--seed", "1", "-o", path("a.ovi")}).code, 0);
  const CliRun b = run({"build", "dbo", "-i", path("a.ovi"), "--c1-bits", "4", "--part-bits", "12", "-o", path("a.dbo"), "--json"});
  ASSERT_EQ(b.code, 0) << b.err;
  const auto j = nlohmann::json::parse(b.out);
  EXPECT_EQ(j["params"]["c1_bits"], 4);
  EXPECT_EQ(j["params"]["part_bits"], 12);
  EXPECT_EQ(run({"verify", "-x", path("a.dbo"), "-i", path("a.ovi"), "--random", "2000"}).code, 0);

  const CliRun p = run({"plan", "tlqg", "-n", "1024", "-d", "20", "--json"});
  ASSERT_EQ(p.code, 0);
  EXPECT_EQ(nlohmann::json::parse(p.out)["params"]["w_bits"], 13);
  EXPECT_EQ(run({"plan", "nonsense", "-n", "1024", "-d", "20"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
}

TEST_F(CliTest, Bench) {
  const CliRun s = run({"bench", "sweep", "-a", "tlqg,blqg", "-n", "256,512", "-c", "2", "--queries", "50", "--csv"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(std::count(s.out.begin(), s.out.end(), '\n'), 5);

  const CliRun p = run({"bench", "sdperm", "-n", "256", "-d", "16", "--seeds", "3", "-k", "2"});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto j = nlohmann::json::parse(p.out);
  EXPECT_EQ(j["random"].size(), 3u);

  ASSERT_EQ(run({"gen", "random", "-n", "256", "-d", "16", "-o", path("a.ovi")}).code, 0);
  const CliRun l = run({"bench", "lists", "-i", path("a.ovi"), "--w-bits", "8", "--samples", "4", "--band", "2,10",
                     "-o", path("l.json")});
  ASSERT_EQ(l.code, 0) << l.err;
  std::ifstream in(path("l.json"));
  EXPECT_EQ(nlohmann::json::parse(in)["samples"].size(), 4u);
}
