#include "stablevol/lattice.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "stablevol/rng.hpp"
#include "stablevol/sampler.hpp"
#include "stablevol/stable_law.hpp"

using stablevol::NoiseLattice;
using stablevol::RngStream;
using stablevol::StableLaw;
using stablevol::aggregate;
using stablevol::build_lattice;

TEST(BuildLattice, CellCountArithmetic) {
    const StableLaw law(1.8, 0.0, 1.0);
    RngStream rng(1, 0);
    const NoiseLattice lattice = build_lattice(law, 0x1.0p-16, 1.0, rng);
    EXPECT_EQ(lattice.n_fine, 65536);
    EXPECT_EQ(lattice.increments.size(), 65536u);
    EXPECT_EQ(lattice.stream_index, 0u);
}

TEST(BuildLattice, NonIntegerRatioRejected) {
    const StableLaw law(1.8, 0.0, 1.0);
    RngStream rng(1, 0);
    EXPECT_THROW(build_lattice(law, 0.3, 1.0, rng), std::domain_error);
    EXPECT_THROW(build_lattice(law, -0.25, 1.0, rng), std::domain_error);
}

TEST(BuildLattice, DeterministicForFixedSeed) {
    const StableLaw law(1.5, 0.0, 1.0);
    RngStream a(2024, 3);
    RngStream b(2024, 3);
    const NoiseLattice la = build_lattice(law, 0x1.0p-10, 1.0, a);
    const NoiseLattice lb = build_lattice(law, 0x1.0p-10, 1.0, b);
    EXPECT_EQ(la.increments, lb.increments);
}

TEST(BuildLattice, SymmetricCellsHaveNearZeroMean) {
    const StableLaw law(1.8, 0.0, 1.0);
    RngStream rng(99, 0);
    const NoiseLattice lattice = build_lattice(law, 0x1.0p-20, 1.0, rng);  // ~1e6 cells
    double sum = 0.0, sumsq = 0.0;
    for (const double x : lattice.increments) {
        sum += x;
        sumsq += x * x;
    }
    const double n = static_cast<double>(lattice.n_fine);
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    EXPECT_LT(std::abs(mean), 4.0 * se);
}

TEST(Aggregate, RatioOneIsBitwiseIdentity) {
    const std::vector<double> fine = {0.25, -1.5, 3.0, 1e-9};
    const std::vector<double> out = aggregate(fine, 1);
    EXPECT_EQ(out, fine);
}

TEST(Aggregate, SmallBlockArithmetic) {
    const std::vector<double> fine = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> out = aggregate(fine, 2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0], 3.0);
    EXPECT_EQ(out[1], 7.0);
}

TEST(Aggregate, RejectsNonDyadicRatios) {
    const std::vector<double> fine(12, 1.0);
    EXPECT_THROW(aggregate(fine, 3), std::domain_error);
    EXPECT_THROW(aggregate(fine, 0), std::domain_error);
    EXPECT_THROW(aggregate(fine, -2), std::domain_error);
    // power of two that does not divide the lattice evenly
    const std::vector<double> odd(6, 1.0);
    EXPECT_THROW(aggregate(odd, 4), std::domain_error);
}

TEST(Aggregate, LatticeOverloadChecksRatio) {
    const StableLaw law(1.5, 0.0, 1.0);
    RngStream rng(5, 0);
    const NoiseLattice lattice = build_lattice(law, 0x1.0p-8, 1.0, rng);
    EXPECT_NO_THROW(aggregate(lattice, 0x1.0p-6));
    EXPECT_THROW(aggregate(lattice, 3.0 * 0x1.0p-8), std::domain_error);
    EXPECT_THROW(aggregate(lattice, 0x1.0p-9), std::domain_error);  // finer than the lattice
}

// Dyadic tree block sums make blockwise aggregation exactly associative:
// fine -> delta -> 2 delta is bit-identical to fine -> 2 delta, at every level.
TEST(Aggregate, TelescopingIsBitwise) {
    const StableLaw law(1.6, 0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream rng(seed, 0);
        const NoiseLattice lattice = build_lattice(law, 0x1.0p-12, 1.0, rng);
        for (std::int64_t r1 : {2, 4, 16}) {
            for (std::int64_t r2 : {2, 8}) {
                const std::vector<double> one_hop = aggregate(lattice.increments, r1 * r2);
                const std::vector<double> two_hop =
                    aggregate(aggregate(lattice.increments, r1), r2);
                ASSERT_EQ(one_hop, two_hop) << "seed=" << seed << " r1=" << r1 << " r2=" << r2;
            }
        }
    }
}

TEST(Aggregate, TotalSumPreservedAgainstExtendedPrecision) {
    const StableLaw law(1.4, 0.0, 1.0);
    RngStream rng(77, 0);
    const NoiseLattice lattice = build_lattice(law, 0x1.0p-14, 1.0, rng);
    double max_abs = 0.0;
    for (const double x : lattice.increments) max_abs = std::max(max_abs, std::abs(x));
    const long double fine_sum = oracles::extended_sum(lattice.increments);
    for (const std::int64_t r : {2, 64, 4096}) {
        const std::vector<double> coarse = aggregate(lattice.increments, r);
        const long double coarse_sum = oracles::extended_sum(coarse);
        const double bound = static_cast<double>(lattice.n_fine) * 0x1.0p-50 * max_abs;
        EXPECT_LT(std::abs(static_cast<double>(coarse_sum - fine_sum)), bound) << "r=" << r;
    }
}

// Pooled coarse increments are distributed exactly like fresh draws of the
// increment law at the coarse step: two-sample KS at the 1% level.
TEST(Aggregate, DistributionalConsistency) {
    const double alpha = 1.5;
    const StableLaw law(alpha, 0.0, 1.0);
    const double delta_fine = 0x1.0p-8;
    const double delta_coarse = 0x1.0p-4;
    std::vector<double> pooled;
    for (std::uint64_t traj = 0; traj < 1000; ++traj) {
        RngStream rng(4242, traj);
        const NoiseLattice lattice = build_lattice(law, delta_fine, 1.0, rng);
        const std::vector<double> coarse = aggregate(lattice, delta_coarse);
        pooled.insert(pooled.end(), coarse.begin(), coarse.end());
    }
    ASSERT_EQ(pooled.size(), 16000u);

    std::vector<double> fresh(pooled.size());
    RngStream rng(31415, 0);
    for (double& x : fresh) x = stablevol::sample_increment(law, delta_coarse, rng);
    const double d = oracles::ks_statistic(pooled, fresh);
    EXPECT_LT(d, oracles::ks_critical_1pct(pooled.size(), fresh.size()));
}

TEST(Aggregate, MemoryFootprintOfReferenceLattice) {
    const StableLaw law(1.8, 0.0, 1.0);
    RngStream rng(1, 0);
    const NoiseLattice lattice = build_lattice(law, 0x1.0p-16, 1.0, rng);
    EXPECT_LE(lattice.increments.size() * sizeof(double), std::size_t{1} << 20);  // <= 1 MiB
}
