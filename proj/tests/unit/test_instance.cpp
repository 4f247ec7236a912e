#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "ovi/instance.hpp"
#include "ovi/instance_gen.hpp"

using namespace ovi;

TEST(Instance, TextRoundTrip) {
  const Instance inst(5, {0b00001, 0b10110, 0});
  std::stringstream ss;
  write_instance_text(inst, ss);
  EXPECT_EQ(ss.str(), "OVI 1\nn=3 d=5\n10000\n01101\n00000\n");
  EXPECT_EQ(read_instance_text(ss), inst);
}

TEST(Instance, BinaryRoundTrip) {
  const Instance inst = gen_random(100, 40, 5);
  std::stringstream ss;
  write_instance_binary(inst, ss);
  EXPECT_EQ(ss.str().size(), 12u + 8u * 100u);
  EXPECT_EQ(read_instance_binary(ss), inst);
}

TEST(Instance, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::stringstream ss(text);
    try {
      read_instance_text(ss);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 999;
  };
  EXPECT_EQ(line_of("OVI 2\n"), 1u);
  EXPECT_EQ(line_of("OVI 1\nn=2\n"), 2u);
  EXPECT_EQ(line_of("OVI 1\nn=2 d=3\n101\n10\n"), 4u);
  EXPECT_EQ(line_of("OVI 1\nn=2 d=3\n1a1\n101\n"), 3u);
  EXPECT_EQ(line_of("OVI 1\nn=2 d=3\n101\n"), 4u);
  EXPECT_EQ(line_of("OVI 1\nn=1 d=65\n"), 2u);
}

TEST(Instance, ContractChecks) {
  EXPECT_THROW(Instance(0, {0}), ContractError);
  EXPECT_THROW(Instance(4, {}), ContractError);
  EXPECT_THROW(Instance(4, {0x10}), ContractError);
}

TEST(Instance, DigestBindsContent) {
  const Instance a(8, {1, 2, 3});
  EXPECT_EQ(a.digest(), Instance(8, {1, 2, 3}).digest());
  EXPECT_NE(a.digest(), Instance(8, {1, 2, 4}).digest());
  EXPECT_NE(a.digest(), Instance(9, {1, 2, 3}).digest());
  EXPECT_NE(a.digest(), Instance(8, {2, 1, 3}).digest());
}

TEST(Instance, FileFormatBySniffing) {
  const auto dir = std::filesystem::temp_directory_path() / "ovi_instance_test";
  std::filesystem::create_directories(dir);
  const Instance inst = gen_random(17, 9, 1);
  write_instance(inst, dir / "a.ovi");
  write_instance(inst, dir / "a.ovib");
  EXPECT_EQ(read_instance(dir / "a.ovi"), inst);
  EXPECT_EQ(read_instance(dir / "a.ovib"), inst);
  EXPECT_THROW(read_instance(dir / "missing.ovi"), ParseError);
  std::filesystem::remove_all(dir);
}
