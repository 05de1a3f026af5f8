#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "matula/primes.hpp"
#include "oracle.hpp"

using namespace matula;

TEST(Primes, FirstPrimesMatchTrialDivision) {
    PrimeTable t(2);
    const auto ref = oracle::primes_upto(20000);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(t.nth_prime(i + 1), ref[i]);
}

TEST(Primes, KnownValues) {
    PrimeTable t;
    EXPECT_EQ(t.nth_prime(1), 2u);
    EXPECT_EQ(t.nth_prime(330), 2213u);
    EXPECT_EQ(t.nth_prime(10000), 104729u);
    EXPECT_EQ(t.nth_prime(1000000), 15485863u);
    EXPECT_EQ(t.prime_rank(15485863), 1000000u);
}

TEST(Primes, SegmentBoundariesCountCorrectly) {
    // pi(10^6) = 78498; the default sieve grows through several 2^18 segments
    PrimeTable t(16);
    t.extend_to(1000000);
    std::size_t count = 0;
    for (u64 p : t.primes()) count += p <= 1000000;
    EXPECT_EQ(count, 78498u);
    for (u64 v : {262143u, 262144u, 262147u, 524287u, 524309u})
        EXPECT_EQ(t.is_prime(v), oracle::is_prime(v)) << v;
}

TEST(Primes, RankInvertsNth) {
    PrimeTable t;
    for (u64 n = 1; n <= 5000; ++n) EXPECT_EQ(t.prime_rank(t.nth_prime(n)), n);
}

TEST(Primes, RankOfCompositeIsDomainError) {
    PrimeTable t;
    EXPECT_THROW(t.prime_rank(4), domain_error);
    EXPECT_THROW(t.prime_rank(1), domain_error);
    EXPECT_THROW(t.nth_prime(0), domain_error);
}

TEST(Primes, IsPrimeBeyondTheSieveUsesTrialDivision) {
    PrimeTable t(100);
    EXPECT_TRUE(t.is_prime(1000000000039ull));
    EXPECT_FALSE(t.is_prime(1000000000037ull));
    EXPECT_EQ(t.is_prime(999999999989ull), oracle::is_prime(999999999989ull));
    EXPECT_TRUE(t.is_prime(2147483647u));
    EXPECT_FALSE(t.is_prime(0));
    EXPECT_FALSE(t.is_prime(1));
}

TEST(Primes, CapOverflowThrows) {
    PrimeTable t(100, 1000);
    EXPECT_EQ(t.nth_prime(168), 997u);
    EXPECT_THROW(t.nth_prime(169), overflow_error);
    EXPECT_THROW(t.extend_to(1001), overflow_error);
}

TEST(Primes, FactorizeRoundTrips) {
    PrimeTable t;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<u64> dist(1, u64{1} << 40);
    for (int i = 0; i < 300; ++i) {
        const u64 k = dist(rng);
        u64 prod = 1;
        u64 prev = 0;
        for (const auto& [p, e] : t.factorize(k)) {
            EXPECT_TRUE(oracle::is_prime(p));
            EXPECT_GT(p, prev);
            prev = p;
            for (unsigned j = 0; j < e; ++j) prod *= p;
        }
        EXPECT_EQ(prod, k);
    }
    EXPECT_TRUE(t.factorize(1).empty());
    EXPECT_THROW(t.factorize(0), domain_error);
}

TEST(Primes, SquarefreeAndOmega) {
    PrimeTable t;
    for (u64 k = 1; k <= 3000; ++k) {
        const auto f = t.factorize(k);
        EXPECT_EQ(is_squarefree(f), oracle::squarefree(k)) << k;
        EXPECT_EQ(big_omega(f), oracle::omega(k)) << k;
    }
}

TEST(Primes, CacheRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "matula_prime_cache_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "primes.bin";
    {
        PrimeTable t(2);
        t.ensure_count(50000);
        ASSERT_TRUE(t.save(file));
    }
    PrimeTable fresh(2);
    ASSERT_TRUE(fresh.load(file));
    EXPECT_GE(fresh.size(), 50000u);
    EXPECT_EQ(fresh.lookup_nth(50000), 611953u);

    std::ofstream(dir / "bad.bin") << "junk";
    PrimeTable other(2);
    EXPECT_FALSE(other.load(dir / "bad.bin"));
    EXPECT_FALSE(other.load(dir / "missing.bin"));
    EXPECT_EQ(other.nth_prime(10), 29u);
    std::filesystem::remove_all(dir);
}

TEST(Primes, LookupsAreConstAndChecked) {
    PrimeTable t(1000);
    const PrimeTable& c = t;
    EXPECT_EQ(c.lookup_nth(4), 7u);
    EXPECT_EQ(c.lookup_rank(997), 168u);
    EXPECT_TRUE(c.lookup_is_prime(997));
    EXPECT_THROW(c.lookup_nth(100000), overflow_error);
    EXPECT_THROW(c.lookup_rank(998), domain_error);
}
