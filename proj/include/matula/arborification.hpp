#pragma once

/**
 * @file arborification.hpp
 * @brief The monoid isomorphism between positive integers and rooted forests.
 *
 *   arborify(1)   = empty forest
 *   arborify(m*n) = arborify(m) * arborify(n)          (multiset union)
 *   arborify(p_k) = b_plus(arborify(k))
 *
 * The vertex/edge/leaf counts v, a, f of arborify(n), the number of prime
 * factors omega(n) = v - a and the degree delta(n) = v + a are completely
 * additive and are computed here arithmetically from the factorization,
 * without building trees.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "matula/arith.hpp"
#include "matula/forest.hpp"
#include "matula/primes.hpp"

namespace matula {

inline Tree arborify_prime(u64 q, PrimeTable& table);

inline Forest arborify(u64 n, PrimeTable& table) {
    if (n == 0) throw domain_error("arborify is defined on positive integers");
    std::vector<Tree> trees;
    for (const auto& [p, e] : table.factorize(n)) {
        Tree t = arborify_prime(p, table);
        for (unsigned i = 1; i < e; ++i) trees.push_back(t);
        trees.push_back(std::move(t));
    }
    return Forest(std::move(trees));
}

inline Tree arborify_prime(u64 q, PrimeTable& table) {
    return b_plus(arborify(table.prime_rank(q), table));
}

inline u64 number_of(const Forest& f, PrimeTable& table);

inline u64 number_of(const Tree& t, PrimeTable& table) {
    u64 rank = 1;
    for (const auto& c : t.children()) rank = checked_mul(rank, number_of(c, table));
    return table.nth_prime(rank);
}

inline u64 number_of(const Forest& f, PrimeTable& table) {
    u64 n = 1;
    for (const auto& t : f.trees()) n = checked_mul(n, number_of(t, table));
    return n;
}

struct Stats {
    u64 v = 0;      ///< vertices of arborify(n)
    u64 a = 0;      ///< edges
    u64 f = 0;      ///< leaves
    u64 omega = 0;  ///< prime factors with multiplicity, v - a
    u64 delta = 0;  ///< degree, v + a

    Stats& operator+=(const Stats& o) {
        v += o.v;
        a += o.a;
        f += o.f;
        omega += o.omega;
        delta += o.delta;
        return *this;
    }
    friend Stats operator*(u64 k, Stats s) {
        s.v *= k;
        s.a *= k;
        s.f *= k;
        s.omega *= k;
        s.delta *= k;
        return s;
    }
    friend bool operator==(const Stats&, const Stats&) = default;
};

/// Memo for stats_of, indexed by n. Not synchronized: keep one per thread.
class StatsCache {
public:
    explicit StatsCache(u64 max_entries = u64{1} << 22) : max_entries_(max_entries) {}

    const Stats* find(u64 n) const {
        return n < known_.size() && known_[n] ? &values_[n] : nullptr;
    }
    void store(u64 n, const Stats& s) {
        if (n >= max_entries_) return;
        if (n >= known_.size()) {
            const u64 grow = std::min<u64>(max_entries_, std::max<u64>(n + 1, 2 * known_.size()));
            known_.resize(grow, 0);
            values_.resize(grow);
        }
        known_[n] = 1;
        values_[n] = s;
    }

private:
    u64 max_entries_;
    std::vector<char> known_;
    std::vector<Stats> values_;
};

inline Stats stats_of(u64 n, PrimeTable& table, StatsCache* cache = nullptr);

/// Stats of the single tree arborify(p_k).
inline Stats prime_stats(u64 q, PrimeTable& table, StatsCache* cache = nullptr) {
    const Stats inner = stats_of(table.prime_rank(q), table, cache);
    Stats s;
    s.v = inner.v + 1;
    s.a = inner.a + inner.omega;
    s.f = std::max<u64>(inner.f, 1);
    s.omega = 1;
    s.delta = s.v + s.a;
    return s;
}

inline Stats stats_of(u64 n, PrimeTable& table, StatsCache* cache) {
    if (n == 0) throw domain_error("stats are defined on positive integers");
    if (cache)
        if (const Stats* s = cache->find(n)) return *s;
    Stats out;
    for (const auto& [p, e] : table.factorize(n)) out += e * prime_stats(p, table, cache);
    if (cache) cache->store(n, out);
    return out;
}

/// Every n with delta(n) == m, ascending.
inline std::vector<u64> enumerate_degree(u64 m, PrimeTable& table) {
    struct Entry {
        u64 n;
        u64 smallest_prime;  // max() for n == 1
        u64 omega;
    };
    constexpr u64 none = std::numeric_limits<u64>::max();

    // levels[d]: all integers of degree d; pools[d]: primes of degree d.
    std::vector<std::vector<Entry>> levels(m + 1);
    std::vector<std::vector<u64>> pools(m + 1);
    levels[0].push_back({1, none, 0});

    for (u64 d = 1; d <= m; ++d) {
        // delta(p_k) = delta(k) + omega(k) + 1
        for (u64 j = 0; j < d; ++j)
            for (const Entry& k : levels[j])
                if (j + k.omega + 1 == d) pools[d].push_back(table.nth_prime(k.n));
        std::sort(pools[d].begin(), pools[d].end());

        // Smallest prime factor q of degree j times a cofactor of degree d - j
        // whose prime factors are all >= q.
        std::vector<Entry>& level = levels[d];
        for (u64 j = 1; j <= d; ++j)
            for (u64 q : pools[j])
                for (const Entry& rest : levels[d - j])
                    if (q <= rest.smallest_prime)
                        level.push_back({checked_mul(q, rest.n), q, rest.omega + 1});
        std::sort(level.begin(), level.end(),
                  [](const Entry& x, const Entry& y) { return x.n < y.n; });
    }

    std::vector<u64> out;
    out.reserve(levels[m].size());
    for (const Entry& e : levels[m]) out.push_back(e.n);
    return out;
}

/// Every n <= bound whose forest has exactly leaf_count leaves.
inline std::vector<u64> enumerate_leaf_class(u64 leaf_count, u64 bound, PrimeTable& table) {
    if (leaf_count == 0) throw domain_error("leaf count must be positive");
    StatsCache cache(std::min<u64>(bound + 1, u64{1} << 24));
    std::vector<u64> out;
    for (u64 n = 1; n <= bound; ++n)
        if (stats_of(n, table, &cache).f == leaf_count) out.push_back(n);
    return out;
}

} // namespace matula
