#include "stablevol/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

using stablevol::RngStream;

TEST(RngStream, SameAddressSameSequence) {
    RngStream a(123456789, 7);
    RngStream b(123456789, 7);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
}

TEST(RngStream, DistinctStreamsDiffer) {
    RngStream a(123456789, 0);
    RngStream b(123456789, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) {
        if (a.next_u64() == b.next_u64()) ++same;
    }
    EXPECT_EQ(same, 0);
}

TEST(RngStream, UniformStrictlyInsideUnitInterval) {
    RngStream rng(42, 0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform_open01();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    EXPECT_LT(lo, 1e-4);
    EXPECT_GT(hi, 1.0 - 1e-4);
}

TEST(RngStream, ExponentialPositiveWithUnitMean) {
    RngStream rng(42, 3);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double w = rng.exponential();
        ASSERT_GT(w, 0.0);
        sum += w;
    }
    EXPECT_NEAR(sum / n, 1.0, 0.01);
}

// Frozen first outputs of two addresses; any change to the seeding scheme is
// a reproducibility break and must show up here.
TEST(RngStream, FrozenRegressionValues) {
    RngStream a(0, 0);
    std::vector<std::uint64_t> first;
    for (int i = 0; i < 3; ++i) first.push_back(a.next_u64());
    RngStream b(0xDEADBEEFCAFEF00Dull, 17);
    std::vector<std::uint64_t> second;
    for (int i = 0; i < 3; ++i) second.push_back(b.next_u64());

    // Values locked by the fully specified mt19937_64 + seed_seq pipeline.
    const std::vector<std::uint64_t> expect_a = {9826868804458059804ull, 10035197629148757060ull,
                                                 8936438762847451071ull};
    const std::vector<std::uint64_t> expect_b = {5785753041617357370ull, 17505834546015055506ull,
                                                 9397990651764024979ull};
    EXPECT_EQ(first, expect_a);
    EXPECT_EQ(second, expect_b);
}
