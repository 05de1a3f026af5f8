#pragma once

/**
 * @file verify.hpp
 * @brief Exhaustive range scans for the prime inequalities behind the
 * Butcher and fusion products, plus minimal admissible k-tuple widths.
 *
 * Every scan visits its whole parameter rectangle and reports the complete
 * violation set. Comparisons are exact integer comparisons, except for the
 * logarithmic bounds on p_n which use doubles with a relative guard band and
 * a long double re-check of anything that lands inside it.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matula/arith.hpp"
#include "matula/nap.hpp"
#include "matula/primes.hpp"

namespace matula {

struct RangeAxis {
    std::string name;
    i64 lo;
    i64 hi;

    friend bool operator==(const RangeAxis&, const RangeAxis&) = default;
};

using Tuple = std::vector<i64>;

struct ScanReport {
    std::string name;
    std::vector<RangeAxis> range;
    std::vector<Tuple> exceptions;  ///< sorted, exact violation set
    std::vector<Tuple> details;     ///< scan-specific witness rows, may be empty
    double elapsed_ms = 0;
};

inline nlohmann::ordered_json to_json(const ScanReport& r, bool with_timing = true) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    auto& range = j["range"] = nlohmann::ordered_json::object();
    for (const auto& axis : r.range) range[axis.name] = {axis.lo, axis.hi};
    j["exceptions"] = nlohmann::ordered_json::array();
    for (const auto& t : r.exceptions) j["exceptions"].push_back(t);
    if (!r.details.empty()) j["details"] = r.details;
    if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

namespace detail {

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

/// Runs row(i, out) for i in [lo, hi] on contiguous chunks and concatenates
/// the per-chunk outputs in row order. `row` may only read the prime table.
template <class Row>
std::vector<Tuple> scan_rows(u64 lo, u64 hi, unsigned threads, Row row) {
    if (hi < lo) return {};
    const u64 rows = hi - lo + 1;
    threads = static_cast<unsigned>(std::clamp<u64>(threads, 1, rows));
    std::vector<std::vector<Tuple>> parts(threads);
    auto work = [&](unsigned t) {
        const u64 begin = lo + rows * t / threads;
        const u64 end = lo + rows * (t + 1) / threads;
        for (u64 i = begin; i < end; ++i) row(i, parts[t]);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    std::vector<Tuple> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

inline i64 as_i64(u64 v) { return static_cast<i64>(v); }

} // namespace detail

/// (a, n) with 2 <= a <= a_max, 1 <= n <= n_max and p_{an} <= a * p_n.
inline ScanReport scan_pan_apn(u64 a_max, u64 n_max, PrimeTable& table,
                               unsigned threads = detail::default_threads()) {
    if (a_max < 2 || n_max < 1) throw domain_error("empty range: need a_max >= 2 and n_max >= 1");
    detail::Stopwatch clock;
    table.ensure_count(checked_mul(a_max, n_max));
    const PrimeTable& t = table;
    ScanReport r{"pan-apn", {{"a", 2, detail::as_i64(a_max)}, {"n", 1, detail::as_i64(n_max)}}, {}, {}, 0};
    r.exceptions = detail::scan_rows(2, a_max, threads, [&](u64 a, std::vector<Tuple>& out) {
        for (u64 n = 1; n <= n_max; ++n)
            if (t.lookup_nth(a * n) <= a * t.lookup_nth(n))
                out.push_back({detail::as_i64(a), detail::as_i64(n)});
    });
    r.elapsed_ms = clock.ms();
    return r;
}

/// Unordered {m, n} (reported as m <= n) in the rectangle with p_{mn} >= p_m * p_n.
inline ScanReport scan_fusion(u64 m_max, u64 n_max, PrimeTable& table,
                              unsigned threads = detail::default_threads()) {
    if (m_max < 1 || n_max < 1) throw domain_error("empty range: need m_max, n_max >= 1");
    detail::Stopwatch clock;
    table.ensure_count(checked_mul(m_max, n_max));
    const PrimeTable& t = table;
    ScanReport r{"fusion", {{"m", 1, detail::as_i64(m_max)}, {"n", 1, detail::as_i64(n_max)}}, {}, {}, 0};
    r.exceptions = detail::scan_rows(1, m_max, threads, [&](u64 m, std::vector<Tuple>& out) {
        for (u64 n = 1; n <= n_max; ++n)
            if (t.lookup_nth(m * n) >= t.lookup_nth(m) * t.lookup_nth(n))
                out.push_back({detail::as_i64(std::min(m, n)), detail::as_i64(std::max(m, n))});
    });
    std::sort(r.exceptions.begin(), r.exceptions.end());
    r.exceptions.erase(std::unique(r.exceptions.begin(), r.exceptions.end()), r.exceptions.end());
    r.elapsed_ms = clock.ms();
    return r;
}

/// Unreduced p_k * p_l / p_{kl}. Compared exactly by cross-multiplication.
struct Ratio {
    u64 num;
    u64 den;

    bool greater_than_one() const { return num > den; }
    friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct RatioEntry {
    u64 k;
    u64 l;
    Ratio value;
};

/// Row-major over l, then k, both starting at 2.
inline std::vector<RatioEntry> ratio_table(u64 k_max, u64 l_max, PrimeTable& table) {
    if (k_max < 2 || l_max < 2) throw domain_error("empty range: need k_max, l_max >= 2");
    table.ensure_count(checked_mul(k_max, l_max));
    std::vector<RatioEntry> out;
    for (u64 l = 2; l <= l_max; ++l)
        for (u64 k = 2; k <= k_max; ++k)
            out.push_back({k, l, {table.lookup_nth(k) * table.lookup_nth(l), table.lookup_nth(k * l)}});
    return out;
}

enum class MrdForm : i64 { lower = 1, upper = 2, upper_constant = 3 };

namespace detail {
constexpr double mrd_guard = 1e-9;

/// Sign of (rhs - lhs) decided in double unless inside the guard band.
template <class L, class R>
bool holds_le(L lhs_of, R rhs_of) {
    const double lhs = static_cast<double>(lhs_of.template operator()<double>());
    const double rhs = static_cast<double>(rhs_of.template operator()<double>());
    if (std::abs(rhs - lhs) > mrd_guard * std::max(std::abs(lhs), std::abs(rhs)))
        return lhs <= rhs;
    return lhs_of.template operator()<long double>() <= rhs_of.template operator()<long double>();
}
} // namespace detail

/// Lower bound n(log n + log log n - 1) <= p_n on [2, n_max]; upper bounds
/// with the 1.8 log log n / log n term and with the constant -0.337 on
/// [13, n_max]. Exceptions are [n, form] with form in MrdForm.
inline ScanReport scan_mrd_bounds(u64 n_max, PrimeTable& table) {
    if (n_max < 2) throw domain_error("empty range: need n_max >= 2");
    detail::Stopwatch clock;
    table.ensure_count(n_max);
    ScanReport r{"mrd", {{"n", 2, detail::as_i64(n_max)}}, {}, {}, 0};
    for (u64 n = 2; n <= n_max; ++n) {
        const u64 p = table.lookup_nth(n);
        auto pn = [p]<class T>() { return static_cast<T>(p); };
        auto lower = [n]<class T>() {
            const T x = static_cast<T>(n);
            return x * (std::log(x) + std::log(std::log(x)) - 1);
        };
        auto upper = [n]<class T>() {
            const T x = static_cast<T>(n);
            const T ll = std::log(std::log(x));
            return x * (std::log(x) + ll - 1 + T(1.8) * ll / std::log(x));
        };
        auto upper_constant = [n]<class T>() {
            const T x = static_cast<T>(n);
            return x * (std::log(x) + std::log(std::log(x)) - T(0.337));
        };
        if (!detail::holds_le(lower, pn)) r.exceptions.push_back({detail::as_i64(n), 1});
        if (n >= 13) {
            if (!detail::holds_le(pn, upper)) r.exceptions.push_back({detail::as_i64(n), 2});
            if (!detail::holds_le(pn, upper_constant)) r.exceptions.push_back({detail::as_i64(n), 3});
        }
    }
    r.elapsed_ms = clock.ms();
    return r;
}

/// n in [2, n_max] violating p_n / n <= p_{p_n} / p_n, checked as p_n^2 <= n * p_{p_n}.
inline ScanReport scan_sousselier(u64 n_max, PrimeTable& table,
                                  unsigned threads = detail::default_threads()) {
    if (n_max < 2) throw domain_error("empty range: need n_max >= 2");
    detail::Stopwatch clock;
    table.ensure_count(table.nth_prime(n_max));
    const PrimeTable& t = table;
    ScanReport r{"sousselier", {{"n", 2, detail::as_i64(n_max)}}, {}, {}, 0};
    r.exceptions = detail::scan_rows(2, n_max, threads, [&](u64 n, std::vector<Tuple>& out) {
        using u128 = unsigned __int128;
        const u64 p = t.lookup_nth(n);
        if (u128{p} * p > u128{n} * t.lookup_nth(p)) out.push_back({detail::as_i64(n)});
    });
    r.elapsed_ms = clock.ms();
    return r;
}

/// n in [12, n_max] with p_n <= 3n. details holds [n, p_n, 3n] for the
/// largest failing n below 12.
inline ScanReport scan_three_n(u64 n_max, PrimeTable& table) {
    if (n_max < 12) throw domain_error("empty range: need n_max >= 12");
    detail::Stopwatch clock;
    table.ensure_count(n_max);
    ScanReport r{"three-n", {{"n", 12, detail::as_i64(n_max)}}, {}, {}, 0};
    for (u64 n = 12; n <= n_max; ++n)
        if (table.lookup_nth(n) <= 3 * n) r.exceptions.push_back({detail::as_i64(n)});
    for (u64 n = 11; n >= 1; --n) {
        const u64 p = table.lookup_nth(n);
        if (p <= 3 * n) {
            r.details.push_back({detail::as_i64(n), detail::as_i64(p), detail::as_i64(3 * n)});
            break;
        }
    }
    r.elapsed_ms = clock.ms();
    return r;
}

/// Butcher growth: prime pairs with s * t <= max_product and s <> t <= s * t.
inline ScanReport scan_butcher_growth(u64 max_product, PrimeTable& table) {
    if (max_product < 4) throw domain_error("empty range: need max_product >= 4");
    detail::Stopwatch clock;
    table.extend_to(max_product / 2);
    const auto all = table.primes();
    const std::vector<u64> primes(all.begin(), std::upper_bound(all.begin(), all.end(), max_product / 2));
    ScanReport r{"butcher", {{"product", 4, detail::as_i64(max_product)}}, {}, {}, 0};
    for (u64 s : primes)
        for (u64 t : primes) {
            if (s * t > max_product) break;
            if (butcher(s, t, table) <= s * t)
                r.exceptions.push_back({detail::as_i64(s), detail::as_i64(t)});
        }
    r.elapsed_ms = clock.ms();
    return r;
}

/// Cuts that increase the value: [q, detached, remaining, product] for primes q <= q_max.
inline ScanReport scan_cut_increase(u64 q_max, PrimeTable& table) {
    if (q_max < 3) throw domain_error("empty range: need q_max >= 3");
    detail::Stopwatch clock;
    ScanReport r{"cuts", {{"q", 3, detail::as_i64(q_max)}}, {}, {}, 0};
    for (const auto& c : value_increasing_cuts(q_max, table))
        r.exceptions.push_back({detail::as_i64(c.prime), detail::as_i64(c.pair.detached),
                                detail::as_i64(c.pair.remaining), detail::as_i64(c.pair.product())});
    r.elapsed_ms = clock.ms();
    return r;
}

/// Prime triples with values <= max_value where the NAP law fails.
inline ScanReport scan_nap_law(u64 max_value, PrimeTable& table) {
    if (max_value < 2) throw domain_error("empty range: need max_value >= 2");
    detail::Stopwatch clock;
    table.extend_to(max_value);
    const auto all = table.primes();
    const std::vector<u64> primes(all.begin(), std::upper_bound(all.begin(), all.end(), max_value));
    ScanReport r{"nap", {{"value", 2, detail::as_i64(max_value)}}, {}, {}, 0};
    for (u64 p : primes)
        for (u64 q : primes)
            for (u64 s : primes)
                if (!check_nap_law(p, q, s, table))
                    r.exceptions.push_back({detail::as_i64(p), detail::as_i64(q), detail::as_i64(s)});
    r.elapsed_ms = clock.ms();
    return r;
}

struct ConstellationWidth {
    u64 k;
    u64 width;
    std::vector<u64> pattern;
};

/// For every prime p <= offsets.size(), some residue class mod p is missed.
inline bool is_admissible(const std::vector<u64>& offsets) {
    const u64 k = offsets.size();
    for (u64 p = 2; p <= k; ++p) {
        bool prime = true;
        for (u64 d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
        if (!prime) continue;
        std::vector<char> seen(p, 0);
        u64 distinct = 0;
        for (u64 o : offsets) distinct += !std::exchange(seen[o % p], 1);
        if (distinct == p) return false;
    }
    return true;
}

namespace detail {
class TupleSearch {
public:
    TupleSearch(u64 k, u64 width) : k_(k), width_(width) {
        for (u64 p = 3; p <= k; ++p) {
            bool prime = true;
            for (u64 d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
            if (prime) moduli_.push_back(p);
        }
        counts_.resize(moduli_.size());
        covered_.assign(moduli_.size(), 0);
        for (std::size_t i = 0; i < moduli_.size(); ++i) counts_[i].assign(moduli_[i], 0);
    }

    bool run() {
        add(0);
        if (!try_add(width_)) return false;
        chosen_ = {0};
        if (search(2, k_ - 2)) {
            chosen_.push_back(width_);
            return true;
        }
        return false;
    }

    const std::vector<u64>& pattern() const { return chosen_; }

private:
    bool try_add(u64 o) {
        for (std::size_t i = 0; i < moduli_.size(); ++i)
            if (counts_[i][o % moduli_[i]] == 0 && covered_[i] + 1 == moduli_[i]) return false;
        add(o);
        return true;
    }
    void add(u64 o) {
        for (std::size_t i = 0; i < moduli_.size(); ++i)
            if (counts_[i][o % moduli_[i]]++ == 0) ++covered_[i];
    }
    void remove(u64 o) {
        for (std::size_t i = 0; i < moduli_.size(); ++i)
            if (--counts_[i][o % moduli_[i]] == 0) --covered_[i];
    }

    // Offsets are even (all offsets share the parity of 0), interior ones in [from, width - 2].
    bool search(u64 from, u64 needed) {
        if (needed == 0) return true;
        for (u64 o = from; o + 2 * (needed - 1) <= width_ - 2; o += 2) {
            if (!try_add(o)) continue;
            chosen_.push_back(o);
            if (search(o + 2, needed - 1)) return true;
            chosen_.pop_back();
            remove(o);
        }
        return false;
    }

    u64 k_;
    u64 width_;
    std::vector<u64> moduli_;
    std::vector<std::vector<unsigned>> counts_;
    std::vector<u64> covered_;
    std::vector<u64> chosen_;
};
} // namespace detail

/// Smallest diameter of an admissible k-tuple, 2 <= k <= 13, with one witness.
inline ConstellationWidth min_constellation_width(u64 k) {
    if (k < 2 || k > 13) throw domain_error("infeasible k: supported tuple sizes are 2..13");
    for (u64 width = 2 * (k - 1);; width += 2) {
        detail::TupleSearch search(k, width);
        if (search.run()) return {k, width, search.pattern()};
    }
}

/// c(n) >= p_n for 1 <= n <= n_max, with c(n) the admissible width for n + 1 primes.
/// details rows are [n, p_n, c(n)].
inline ScanReport check_lemma_tuple_consequence(u64 n_max, PrimeTable& table) {
    if (n_max < 1 || n_max > 12) throw domain_error("n_max must lie in 1..12");
    detail::Stopwatch clock;
    ScanReport r{"lemma-tuple", {{"n", 1, detail::as_i64(n_max)}}, {}, {}, 0};
    for (u64 n = 1; n <= n_max; ++n) {
        const u64 c = min_constellation_width(n + 1).width;
        const u64 p = table.nth_prime(n);
        r.details.push_back({detail::as_i64(n), detail::as_i64(p), detail::as_i64(c)});
        if (c < p) r.exceptions.push_back({detail::as_i64(n)});
    }
    r.elapsed_ms = clock.ms();
    return r;
}

} // namespace matula
