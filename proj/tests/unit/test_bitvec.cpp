#include <gtest/gtest.h>

#include <random>

#include "ovi/bitvec.hpp"
#include "test_support.hpp"

using namespace ovi;

namespace {

std::uint64_t naive_extract(std::uint64_t v, std::uint64_t mask) {
  std::uint64_t out = 0;
  unsigned k = 0;
  for (unsigned j = 0; j < 64; ++j) {
    if ((mask >> j) & 1u) {
      if ((v >> j) & 1u) out |= std::uint64_t{1} << k;
      ++k;
    }
  }
  return out;
}

}  // namespace

TEST(BitVec, StringRoundTripIsCoordinateOrder) {
  const BitVec v = BitVec::from_string("1011");
  EXPECT_EQ(v.width(), 4u);
  EXPECT_EQ(v.value(), 0b1101u);
  EXPECT_TRUE(v.test(0));
  EXPECT_FALSE(v.test(1));
  EXPECT_EQ(v.to_string(), "1011");
  EXPECT_EQ(v.popcount(), 3u);
}

TEST(BitVec, RejectsBadInput) {
  EXPECT_THROW(BitVec::from_string(""), ContractError);
  EXPECT_THROW(BitVec::from_string("10x1"), ContractError);
  EXPECT_THROW(BitVec::from_string(std::string(65, '0')), ContractError);
  EXPECT_THROW(BitVec(0b100, 2), ContractError);
  EXPECT_NO_THROW(BitVec(~std::uint64_t{0}, 64));
}

TEST(BitVec, Orthogonality) {
  EXPECT_TRUE(orthogonal(BitVec(0b0101, 4), BitVec(0b1010, 4)));
  EXPECT_FALSE(orthogonal(BitVec(0b0110, 4), BitVec(0b0011, 4)));
  EXPECT_TRUE(orthogonal(BitVec(0, 4), BitVec(0b1111, 4)));
  EXPECT_THROW(orthogonal(BitVec(0, 4), BitVec(0, 5)), ContractError);
}

TEST(BitVec, ExtractMatchesNaiveAndDepositInverts) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5000; ++t) {
    const std::uint64_t v = rng();
    const std::uint64_t mask = rng() & rng();
    const std::uint64_t packed = extract_bits(v, mask);
    ASSERT_EQ(packed, naive_extract(v, mask));
    ASSERT_EQ(deposit_bits(packed, mask), v & mask);
  }
}

TEST(CoordSet, RangeComplementAndRestrict) {
  const CoordSet w = CoordSet::range(2, 5, 8);
  EXPECT_EQ(w.bits(), 0b00011100u);
  EXPECT_EQ(w.size(), 3u);
  EXPECT_EQ(w.complement().bits(), 0b11100011u);
  EXPECT_EQ(CoordSet::all(8).bits(), 0xFFu);
  const BitVec v = BitVec::from_string("00101100");
  // coordinates 2,3,4 of v are 1,0,1
  EXPECT_EQ(restrict(v, w), 0b101u);
  EXPECT_THROW(restrict(v, CoordSet::all(9)), ContractError);
}

TEST(CoordSet, PartitionProperty) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const unsigned d = 1 + static_cast<unsigned>(rng() % 64);
    const CoordSet w(rng() & low_mask(d), d);
    const CoordSet rest = w.complement();
    ASSERT_EQ(w.bits() & rest.bits(), 0u);
    ASSERT_EQ(w.bits() | rest.bits(), low_mask(d));
    ASSERT_EQ(w.size() + rest.size(), d);
  }
}
