#pragma once

/**
 * @file primes.hpp
 * @brief Growable segmented sieve: primality, factorization, p_n and ranks.
 *
 * Ranks are 1-based throughout: nth_prime(1) == 2. The table grows by
 * doubling whenever a query needs more primes, and refuses to sieve past
 * its configured cap (default 2^32) so every value stays in 64-bit range.
 *
 * Mutating queries (nth_prime, prime_rank, is_prime, factorize) may extend
 * the table and need exclusive access. The const lookup_* members never
 * extend and are safe for concurrent readers once the table is large enough.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "matula/arith.hpp"
#include "matula/errors.hpp"

namespace matula {

struct PrimePower {
    u64 prime;
    unsigned multiplicity;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

inline u64 isqrt(u64 n) {
    auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && (r > n / r)) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

class PrimeTable {
public:
    static constexpr u64 default_cap = u64{1} << 32;
    static constexpr u64 default_initial_limit = u64{1} << 16;
    static constexpr std::size_t segment_bytes = std::size_t{1} << 18;

    explicit PrimeTable(u64 initial_limit = default_initial_limit, u64 cap = default_cap)
        : cap_(std::max<u64>(cap, 2)) {
        extend_to(std::min(std::max<u64>(initial_limit, 2), cap_));
    }

    u64 limit() const noexcept { return limit_; }
    u64 cap() const noexcept { return cap_; }
    std::size_t size() const noexcept { return primes_.size(); }
    std::span<const u64> primes() const noexcept { return primes_; }

    /// Sieve at least up to `value`; throws overflow_error past the cap.
    void extend_to(u64 value) {
        if (value <= limit_) return;
        if (value > cap_)
            throw overflow_error("prime table cap " + std::to_string(cap_) +
                                 " exceeded (needed primes up to " + std::to_string(value) + ")");
        u64 target = std::max(value, limit_ > cap_ / 2 ? cap_ : 2 * limit_);
        sieve_range(limit_ + 1, std::min(target, cap_));
    }

    /// Make sure at least n primes are stored.
    void ensure_count(u64 n) {
        if (n <= primes_.size()) return;
        extend_to(std::min(count_upper_bound(n), cap_));
        while (primes_.size() < n) {
            if (limit_ >= cap_)
                throw overflow_error("prime table cap " + std::to_string(cap_) +
                                     " exceeded (needed p_" + std::to_string(n) + ")");
            extend_to(limit_ > cap_ / 2 ? cap_ : 2 * limit_);
        }
    }

    u64 nth_prime(u64 n) {
        if (n == 0) throw domain_error("prime ranks start at 1");
        ensure_count(n);
        return primes_[n - 1];
    }

    u64 prime_rank(u64 q) {
        if (!is_prime(q)) throw domain_error(std::to_string(q) + " is not prime");
        extend_to(q);
        return lookup_rank(q);
    }

    bool is_prime(u64 k) {
        if (k < 2) return false;
        if (k <= limit_) return std::binary_search(primes_.begin(), primes_.end(), k);
        extend_to(isqrt(k));
        for (u64 p : primes_) {
            if (p > k / p) break;
            if (k % p == 0) return false;
        }
        return true;
    }

    /// Ascending prime factorization; factorize(1) is empty.
    std::vector<PrimePower> factorize(u64 k) {
        if (k == 0) throw domain_error("cannot factorize 0");
        std::vector<PrimePower> out;
        if (k > 3) extend_to(isqrt(k));
        for (u64 p : primes_) {
            if (p > k / p) break;
            if (k % p != 0) continue;
            unsigned e = 0;
            while (k % p == 0) {
                k /= p;
                ++e;
            }
            out.push_back({p, e});
        }
        if (k > 1) out.push_back({k, 1});
        return out;
    }

    /// Stored p_n; throws overflow_error when n is beyond the stored count.
    u64 lookup_nth(u64 n) const {
        if (n == 0) throw domain_error("prime ranks start at 1");
        if (n > primes_.size())
            throw overflow_error("p_" + std::to_string(n) + " is not in the table");
        return primes_[n - 1];
    }

    /// Rank of a stored prime; throws domain_error for non-primes.
    u64 lookup_rank(u64 q) const {
        if (q > limit_) throw overflow_error(std::to_string(q) + " is beyond the sieved limit");
        auto it = std::lower_bound(primes_.begin(), primes_.end(), q);
        if (it == primes_.end() || *it != q) throw domain_error(std::to_string(q) + " is not prime");
        return static_cast<u64>(it - primes_.begin()) + 1;
    }

    bool lookup_is_prime(u64 k) const {
        if (k > limit_) throw overflow_error(std::to_string(k) + " is beyond the sieved limit");
        return std::binary_search(primes_.begin(), primes_.end(), k);
    }

    /// Writes the flat cache: u64 count, then count little-endian u64 primes.
    bool save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) return false;
        write_le(out, primes_.size());
        for (u64 p : primes_) write_le(out, p);
        return static_cast<bool>(out);
    }

    /// Adopts a cache file if it is well formed; a missing or bad file is ignored.
    bool load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return false;
        u64 count = 0;
        if (!read_le(in, count) || count == 0) return false;
        std::vector<u64> loaded;
        loaded.reserve(static_cast<std::size_t>(std::min<u64>(count, u64{1} << 28)));
        u64 prev = 0;
        for (u64 i = 0; i < count; ++i) {
            u64 p = 0;
            if (!read_le(in, p)) return false;
            if (p <= prev || (i == 0 && p != 2)) return false;
            if (p > cap_) break;
            loaded.push_back(p);
            prev = p;
        }
        if (loaded.back() <= limit_) return true;
        primes_ = std::move(loaded);
        limit_ = primes_.back();
        return true;
    }

private:
    static u64 count_upper_bound(u64 n) {
        if (n < 6) return 13;
        const double x = static_cast<double>(n);
        return static_cast<u64>(x * (std::log(x) + std::log(std::log(x)))) + 1;
    }

    static std::vector<u64> simple_sieve(u64 n) {
        std::vector<char> composite(n + 1, 0);
        std::vector<u64> out;
        for (u64 i = 2; i <= n; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (u64 j = i * i; j <= n; j += i) composite[j] = 1;
        }
        return out;
    }

    void sieve_range(u64 lo, u64 hi) {
        lo = std::max<u64>(lo, 2);
        const std::vector<u64> base = simple_sieve(isqrt(hi));
        std::vector<char> segment;
        for (u64 start = lo; start <= hi;) {
            const u64 stop = std::min(hi, start + (segment_bytes - 1));
            segment.assign(stop - start + 1, 1);
            for (u64 p : base) {
                if (p * p > stop) break;
                u64 first = std::max(p * p, (start + p - 1) / p * p);
                for (u64 m = first; m <= stop; m += p) segment[m - start] = 0;
            }
            for (u64 i = 0; i < segment.size(); ++i)
                if (segment[i]) primes_.push_back(start + i);
            if (stop == hi) break;
            start = stop + 1;
        }
        limit_ = hi;
    }

    static void write_le(std::ostream& out, u64 v) {
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(bytes, 8);
    }

    static bool read_le(std::istream& in, u64& v) {
        unsigned char bytes[8];
        if (!in.read(reinterpret_cast<char*>(bytes), 8)) return false;
        v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
        return true;
    }

    u64 cap_;
    u64 limit_ = 1;
    std::vector<u64> primes_;
};

inline bool is_squarefree(const std::vector<PrimePower>& factors) {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& f) { return f.multiplicity == 1; });
}

/// Number of prime factors counted with multiplicity.
inline unsigned big_omega(const std::vector<PrimePower>& factors) {
    unsigned n = 0;
    for (const auto& f : factors) n += f.multiplicity;
    return n;
}

} // namespace matula
