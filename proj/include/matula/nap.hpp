#pragma once

/**
 * @file nap.hpp
 * @brief Butcher product, root fusion and edge cuts, all computed on primes.
 *
 * With q = p_m and r = p_n:
 *   butcher(q, r) = p_{q * n}   graft the tree of q onto the root of r
 *   fuse(q, r)    = p_{m * n}   merge the two roots
 *
 * A cut detaches the subtree above one edge of the tree of a prime q and
 * makes it a separate tree, so q becomes the product s * r of two primes
 * (detached, remaining). For q = p_n the cuts are
 *   root cuts:  (d, p_{n/d})                 for each prime d | n
 *   deep cuts:  (s, p_{(n/d) * r})           for each prime d | n, (s, r) in cuts(d)
 */

#include <algorithm>
#include <compare>
#include <map>
#include <vector>

#include "matula/arith.hpp"
#include "matula/primes.hpp"

namespace matula {

struct CutPair {
    u64 detached;
    u64 remaining;

    u64 product() const { return checked_mul(detached, remaining); }

    friend bool operator==(const CutPair&, const CutPair&) = default;
    friend auto operator<=>(const CutPair&, const CutPair&) = default;
};

/// A cut together with the primes visited while the detached subtree is
/// regrafted one level lower at a time; front() is the cut prime, back() the product.
struct CutTrace {
    CutPair pair;
    std::vector<u64> chain;
};

inline void require_prime(u64 q, PrimeTable& table) {
    if (!table.is_prime(q)) throw domain_error(std::to_string(q) + " is not prime");
}

inline u64 butcher(u64 s, u64 t, PrimeTable& table) {
    require_prime(s, table);
    return table.nth_prime(checked_mul(s, table.prime_rank(t)));
}

inline u64 fuse(u64 q, u64 r, PrimeTable& table) {
    const u64 m = table.prime_rank(q);
    const u64 n = table.prime_rank(r);
    return table.nth_prime(checked_mul(m, n));
}

/// Merges every root of the forest of k into one: p_{product of the factor ranks}.
inline u64 fuse_all(u64 k, PrimeTable& table) {
    if (k < 2) throw domain_error("fusion needs at least one tree");
    u64 rank = 1;
    for (const auto& [p, e] : table.factorize(k)) {
        const u64 r = table.prime_rank(p);
        for (unsigned i = 0; i < e; ++i) rank = checked_mul(rank, r);
    }
    return table.nth_prime(rank);
}

inline bool check_nap_law(u64 p, u64 q, u64 r, PrimeTable& table) {
    return butcher(p, butcher(q, r, table), table) == butcher(q, butcher(p, r, table), table);
}

/// Memo of cut traces keyed by prime. Not synchronized: keep one per thread.
/// std::map keeps references to stored entries valid across inserts.
class CutCache {
public:
    const std::vector<CutTrace>* find(u64 q) const {
        auto it = memo_.find(q);
        return it == memo_.end() ? nullptr : &it->second;
    }
    const std::vector<CutTrace>& store(u64 q, std::vector<CutTrace> traces) {
        return memo_[q] = std::move(traces);
    }

private:
    std::map<u64, std::vector<CutTrace>> memo_;
};

namespace detail {
inline std::vector<CutTrace> compute_cut_traces(u64 q, PrimeTable& table, CutCache& cache);

inline const std::vector<CutTrace>& cached_cut_traces(u64 q, PrimeTable& table, CutCache& cache) {
    if (const auto* hit = cache.find(q)) return *hit;
    return cache.store(q, compute_cut_traces(q, table, cache));
}

inline std::vector<CutTrace> compute_cut_traces(u64 q, PrimeTable& table, CutCache& cache) {
    const u64 n = table.prime_rank(q);
    std::vector<CutTrace> out;
    for (const auto& [d, e] : table.factorize(n)) {
        const u64 cofactor = n / d;
        const CutPair root{d, table.nth_prime(cofactor)};
        out.push_back({root, {q, root.product()}});
        const std::vector<CutTrace>& inner = cached_cut_traces(d, table, cache);
        for (const CutTrace& t : inner) {
            const u64 s = t.pair.detached;
            const u64 rest = checked_mul(cofactor, t.pair.remaining);
            CutTrace lifted{{s, table.nth_prime(rest)}, {}};
            for (std::size_t i = 0; i + 1 < t.chain.size(); ++i)
                lifted.chain.push_back(table.nth_prime(checked_mul(cofactor, t.chain[i])));
            lifted.chain.push_back(table.nth_prime(checked_mul(rest, s)));
            lifted.chain.push_back(lifted.pair.product());
            out.push_back(std::move(lifted));
        }
    }
    // stable: the first derivation of a repeated pair is the one kept
    std::stable_sort(out.begin(), out.end(),
                     [](const CutTrace& a, const CutTrace& b) { return a.pair < b.pair; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const CutTrace& a, const CutTrace& b) { return a.pair == b.pair; }),
              out.end());
    return out;
}
} // namespace detail

/// Every cut of the tree of q with its regrafting chain; empty for q = 2.
inline std::vector<CutTrace> cut_traces(u64 q, PrimeTable& table, CutCache* cache = nullptr) {
    require_prime(q, table);
    CutCache local;
    return detail::cached_cut_traces(q, table, cache ? *cache : local);
}

/// The de-duplicated set of (detached, remaining) pairs, ascending.
inline std::vector<CutPair> cuts(u64 q, PrimeTable& table, CutCache* cache = nullptr) {
    std::vector<CutPair> out;
    for (const CutTrace& t : cut_traces(q, table, cache)) out.push_back(t.pair);
    return out;
}

struct IncreasingCut {
    u64 prime;
    CutPair pair;

    friend bool operator==(const IncreasingCut&, const IncreasingCut&) = default;
};

/// Cuts whose product exceeds the prime that was cut, for primes 3 <= q <= q_max.
inline std::vector<IncreasingCut> value_increasing_cuts(u64 q_max, PrimeTable& table) {
    std::vector<IncreasingCut> out;
    CutCache cache;
    table.extend_to(std::max<u64>(q_max, 2));
    const auto all = table.primes();
    const std::vector<u64> primes(all.begin(), std::upper_bound(all.begin(), all.end(), q_max));
    for (u64 q : primes) {
        if (q < 3) continue;
        for (const CutPair& c : cuts(q, table, &cache))
            if (c.product() > q) out.push_back({q, c});
    }
    return out;
}

} // namespace matula
