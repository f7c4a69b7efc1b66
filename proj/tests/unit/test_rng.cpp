#include "wle/rng.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

using namespace wle;

// Random123 known-answer vectors for Philox4x32-10
TEST(Rng, PhiloxKnownAnswers)
{
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}),
        (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
        (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Rng, StreamsAreReproducibleAndDistinct)
{
    RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::vector<std::uint64_t> va, vc, vd;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        va.push_back(x);
        vc.push_back(c.next_u64());
        vd.push_back(d.next_u64());
    }
    EXPECT_NE(va, vc);
    EXPECT_NE(va, vd);
    EXPECT_NE(stream_id({1, 2}), stream_id({2, 1}));
    EXPECT_NE(stream_id({1}), stream_id({1, 0}));
}

TEST(Rng, MomentsOfDraws)
{
    RandomStream r(2024, 1);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0, se = 0;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
        se += r.exponential(2.0);
        ++counts[r.index(10)];
    }
    EXPECT_NEAR(su / n, 0.5, 0.005);
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.015);
    EXPECT_NEAR(se / n, 0.5, 0.005);
    for (int c : counts)
        EXPECT_NEAR(c, n / 10, 600);
}
