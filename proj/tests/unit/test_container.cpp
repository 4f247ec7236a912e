#include <gtest/gtest.h>

#include <sstream>

#include "ovi/container.hpp"
#include "ovi/instance_gen.hpp"
#include "ovi/serialize.hpp"
#include "test_support.hpp"

using namespace ovi;
using namespace ovi::testing;

TEST(Container, RoundTripEveryAlgo) {
  const unsigned d = 16;
  const Instance inst = gen_random(256, d, 77);
  const auto qs = random_queries(d, 1000, 5);
  for (const auto& algo : index_algos()) {
    SCOPED_TRACE(algo);
    const ParamSet p = plan_params(256, d, profile_for(algo));
    const auto idx = build_index(algo, inst, p, 3);
    ASSERT_EQ(idx->algo(), algo);
    std::stringstream ss;
    save_index(ss, *idx, p, inst.digest());
    const LoadedIndex back = load_index(ss);
    EXPECT_EQ(back.algo, algo);
    EXPECT_EQ(back.digest, inst.digest());
    EXPECT_EQ(back.params.w_bits, p.w_bits);
    EXPECT_EQ(back.params.tau_s, p.tau_s);
    EXPECT_EQ(back.index->structure().total_bits(), idx->structure().total_bits());
    for (std::uint64_t q : qs) ASSERT_EQ(back.index->query(BitVec(q, d)), idx->query(BitVec(q, d)));
  }
}

TEST(Container, RejectsDamage) {
  const Instance inst = gen_random(64, 12, 1);
  const ParamSet p = plan_params(64, 12, Profile::tlqg);
  const auto idx = build_index("tlqg", inst, p);
  std::stringstream ss;
  save_index(ss, *idx, p, inst.digest());
  const std::string good = ss.str();

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::stringstream a(bad_magic);
  EXPECT_THROW(load_index(a), ParseError);

  std::stringstream b(good.substr(0, good.size() / 2));
  EXPECT_THROW(load_index(b), Error);

  std::stringstream c(good + "junk");
  EXPECT_THROW(load_index(c), ParseError);

  EXPECT_THROW(build_index("nope", inst, p), Error);
}

TEST(Container, ParamsRoundTrip) {
  ParamSet p = plan_params(1024, 20, Profile::combined);
  p.eps_bits = 3;
  p.budget_bits = 12345;
  std::stringstream ss;
  BinaryWriter w(ss);
  save_params(w, p);
  BinaryReader r(ss);
  const ParamSet q = load_params(r);
  EXPECT_EQ(q.profile, p.profile);
  EXPECT_EQ(q.n, p.n);
  EXPECT_EQ(q.w_mask, p.w_mask);
  EXPECT_EQ(q.x_bits, p.x_bits);
  EXPECT_EQ(q.tau_list, p.tau_list);
  EXPECT_EQ(q.eps_bits, 3u);
  EXPECT_EQ(q.budget_bits, 12345u);
}
