#include <gtest/gtest.h>

#include <random>
#include <set>

#include "matula/arborification.hpp"
#include "matula/nap.hpp"
#include "oracle.hpp"

using namespace matula;

namespace {
std::set<u64> products(const std::vector<CutPair>& cs) {
    std::set<u64> out;
    for (const auto& c : cs) out.insert(c.product());
    return out;
}
} // namespace

TEST(Nap, ButcherExamples) {
    PrimeTable t;
    EXPECT_EQ(butcher(3, 3, t), 13u);
    EXPECT_EQ(butcher(7, 3, t), 43u);
    EXPECT_EQ(butcher(2, 2, t), 3u);
    EXPECT_THROW(butcher(4, 3, t), domain_error);
    EXPECT_THROW(butcher(3, 9, t), domain_error);
}

TEST(Nap, ButcherIsGraftingOntoTheRoot) {
    PrimeTable t;
    for (u64 s : oracle::primes_upto(60))
        for (u64 r : oracle::primes_upto(60)) {
            std::vector<Tree> kids = arborify_prime(r, t).children();
            kids.push_back(arborify_prime(s, t));
            EXPECT_EQ(butcher(s, r, t), number_of(Tree(kids), t));
        }
}

TEST(Nap, FusionExamples) {
    PrimeTable t;
    EXPECT_EQ(fuse(5, 7, t), 37u);
    EXPECT_EQ(fuse(29, 5, t), 113u);
    EXPECT_EQ(fuse(2, 5, t), 5u);
    EXPECT_THROW(fuse(6, 5, t), domain_error);
}

TEST(Nap, FusionIsMergingRoots) {
    PrimeTable t;
    for (u64 a : oracle::primes_upto(80))
        for (u64 b : oracle::primes_upto(80)) {
            std::vector<Tree> kids = arborify_prime(a, t).children();
            const Tree other = arborify_prime(b, t);
            kids.insert(kids.end(), other.children().begin(), other.children().end());
            EXPECT_EQ(fuse(a, b, t), number_of(Tree(kids), t));
        }
}

TEST(Nap, PublishedFusionChains) {
    PrimeTable t;
    // pairs as drawn; the label under 113 * 31 is printed 3403, the product is 3503
    const std::vector<std::pair<u64, u64>> to_2213{{137, 29}, {79, 47}, {317, 11}, {113, 31},
                                                   {257, 13}, {601, 5}, {977, 3}};
    for (const auto& [a, b] : to_2213) {
        EXPECT_EQ(fuse(a, b, t), 2213u) << a << " " << b;
        EXPECT_EQ(fuse_all(a * b, t), 2213u);
    }
    EXPECT_EQ(t.nth_prime(330), 2213u);
    EXPECT_NE(fuse_all(3403, t), 2213u);
    for (u64 k : {145u, 143u, 141u}) EXPECT_EQ(fuse_all(k, t), 113u);
    for (u64 k : {185u, 183u, 169u, 161u}) EXPECT_EQ(fuse_all(k, t), 151u);
    EXPECT_EQ(fuse_all(7, t), 7u);
    EXPECT_THROW(fuse_all(1, t), domain_error);
}

TEST(Nap, NapLawOnRandomTriples) {
    PrimeTable t;
    const auto ps = oracle::primes_upto(200);
    std::mt19937 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const u64 p = ps[rng() % ps.size()], q = ps[rng() % ps.size()], r = ps[rng() % ps.size()];
        EXPECT_TRUE(check_nap_law(p, q, r, t));
    }
}

TEST(Nap, CutsOfKnownPrimes) {
    PrimeTable t;
    EXPECT_EQ(products(cuts(59, t)), (std::set<u64>{21, 22, 34}));
    EXPECT_EQ(products(cuts(17, t)), (std::set<u64>{10, 14}));
    EXPECT_TRUE(cuts(2, t).empty());
    EXPECT_EQ(cuts(3, t), (std::vector<CutPair>{{2, 2}}));
    EXPECT_THROW(cuts(15, t), domain_error);
}

TEST(Nap, TraceChains) {
    PrimeTable t;
    auto chain_to = [&](u64 q, u64 product) {
        for (const auto& tr : cut_traces(q, t))
            if (tr.pair.product() == product) return tr.chain;
        return std::vector<u64>{};
    };
    EXPECT_EQ(chain_to(17, 10), (std::vector<u64>{17, 13, 10}));
    EXPECT_EQ(chain_to(59, 22), (std::vector<u64>{59, 41, 29, 22}));
    EXPECT_EQ(chain_to(59, 21), (std::vector<u64>{59, 43, 21}));
    EXPECT_EQ(chain_to(73, 46), (std::vector<u64>{73, 61, 46}));
    for (u64 q : oracle::primes_upto(400))
        for (const auto& tr : cut_traces(q, t)) {
            EXPECT_EQ(tr.chain.front(), q);
            EXPECT_EQ(tr.chain.back(), tr.pair.product());
        }
}

TEST(Nap, CutsMatchTreeSurgery) {
    PrimeTable t;
    CutCache cache;
    for (u64 q : oracle::primes_upto(3000)) {
        std::vector<std::pair<Tree, Tree>> raw;
        oracle::edge_cuts(arborify_prime(q, t), raw);
        std::set<CutPair> brute;
        for (const auto& [d, r] : raw) brute.insert({number_of(d, t), number_of(r, t)});
        const auto got = cuts(q, t, &cache);
        EXPECT_EQ(std::set<CutPair>(got.begin(), got.end()), brute) << q;
        EXPECT_EQ(got.size(), brute.size()) << q;
    }
}

TEST(Nap, CutsPreserveVerticesAndLowerDegree) {
    PrimeTable t;
    for (u64 q : oracle::primes_upto(2000))
        for (const auto& c : cuts(q, t)) {
            const Stats sq = stats_of(q, t), sp = stats_of(c.product(), t);
            EXPECT_EQ(sp.v, sq.v);
            EXPECT_EQ(sp.delta + 1, sq.delta);
            EXPECT_EQ(sp.omega, 2u);
        }
}

TEST(Nap, ValueIncreasingCutsMatchFrozenScan) {
    PrimeTable t;
    std::vector<std::vector<u64>> got;
    for (const auto& c : value_increasing_cuts(1100, t))
        got.push_back({c.prime, c.pair.detached, c.pair.remaining, c.pair.product()});
    EXPECT_EQ(got, oracle::read_rows("golden/increasing_cuts_1100.txt"));

    std::set<std::pair<u64, u64>> maps;
    for (const auto& r : got) maps.insert({r[0], r[3]});
    for (auto [q, p] : std::vector<std::pair<u64, u64>>{{3, 4}, {5, 6}, {37, 38}, {89, 106}, {1039, 1047}})
        EXPECT_TRUE(maps.count({q, p})) << q << " -> " << p;
}
