#pragma once

/**
 * @file summatory.hpp
 * @brief Moebius and Liouville sums, and the cut/fusion pairing that bounds them.
 *
 * A partner l < k of k is obtained by one move on the forest of k:
 *   cut     replace a prime factor q >= 3 by s * r for a cut (s, r) of q
 *   fusion  replace two prime factors p_m, p_n by p_{mn}
 * Either move changes the number of prime factors by one, so the Liouville
 * signs of k and l differ; in Moebius mode squarefree partners are required.
 * Pairing greedily from N downwards, the sum over [1, N] collapses to the
 * sum over the unpaired integers.
 */

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matula/arith.hpp"
#include "matula/nap.hpp"
#include "matula/primes.hpp"

namespace matula {

enum class SignMode { mobius, liouville };
enum class Policy { largest, smallest, first };

inline std::string_view to_string(SignMode m) { return m == SignMode::mobius ? "mobius" : "liouville"; }

inline std::string_view to_string(Policy p) {
    switch (p) {
    case Policy::largest: return "largest";
    case Policy::smallest: return "smallest";
    case Policy::first: return "first";
    }
    return "largest";
}

inline SignMode parse_mode(std::string_view s) {
    if (s == "mobius") return SignMode::mobius;
    if (s == "liouville") return SignMode::liouville;
    throw domain_error("unknown mode '" + std::string(s) + "' (expected mobius or liouville)");
}

inline Policy parse_policy(std::string_view s) {
    if (s == "largest") return Policy::largest;
    if (s == "smallest") return Policy::smallest;
    if (s == "first") return Policy::first;
    throw domain_error("unknown policy '" + std::string(s) + "' (expected largest, smallest or first)");
}

inline int mobius(u64 k, PrimeTable& table) {
    const auto f = table.factorize(k);
    if (!is_squarefree(f)) return 0;
    return big_omega(f) % 2 == 0 ? 1 : -1;
}

inline int liouville(u64 k, PrimeTable& table) {
    return big_omega(table.factorize(k)) % 2 == 0 ? 1 : -1;
}

inline int sign_of(u64 k, SignMode mode, PrimeTable& table) {
    return mode == SignMode::mobius ? mobius(k, table) : liouville(k, table);
}

/// M(N) or L(N) by direct summation over a segmented factor-count sieve.
inline i64 summatory(u64 N, SignMode mode, PrimeTable& table) {
    if (N == 0) throw domain_error("summatory needs N >= 1");
    const u64 root = isqrt(N);
    table.extend_to(std::max<u64>(root, 2));
    const auto all = table.primes();
    const std::vector<u64> base(all.begin(), std::upper_bound(all.begin(), all.end(), root));
    constexpr u64 block = u64{1} << 16;
    std::vector<u64> rest;
    std::vector<unsigned> omega;
    std::vector<char> squarefree;
    i64 total = 0;
    for (u64 lo = 1; lo <= N; lo += block) {
        const u64 hi = std::min(N, lo + block - 1);
        const u64 len = hi - lo + 1;
        rest.resize(len);
        omega.assign(len, 0);
        squarefree.assign(len, 1);
        for (u64 i = 0; i < len; ++i) rest[i] = lo + i;
        for (u64 p : base) {
            for (u64 m = (lo + p - 1) / p * p; m <= hi; m += p) {
                const u64 i = m - lo;
                unsigned e = 0;
                while (rest[i] % p == 0) {
                    rest[i] /= p;
                    ++e;
                }
                omega[i] += e;
                if (e > 1) squarefree[i] = 0;
            }
        }
        for (u64 i = 0; i < len; ++i) {
            const unsigned w = omega[i] + (rest[i] > 1 ? 1 : 0);
            if (mode == SignMode::mobius && !squarefree[i]) continue;
            total += (w % 2 == 0) ? 1 : -1;
        }
    }
    return total;
}

enum class MoveKind { cut, fusion };

/// One move from k to l. Cut: `factor` is the cut prime and `cut` the pair.
/// Fusion: `factor` <= `other` are the fused primes.
struct Move {
    MoveKind kind;
    u64 factor;
    u64 other;
    CutPair cut;
    u64 result;

    friend bool operator==(const Move&, const Move&) = default;
};

/// Squarefree check for l given the factorization of k (l shares most factors with k).
inline bool in_universe(u64 n, SignMode mode, PrimeTable& table) {
    return mode == SignMode::liouville || is_squarefree(table.factorize(n));
}

/// Every move to some l < k of opposite sign, in generation order: cuts by
/// ascending factor and pair, then fusions by ascending factor pair.
inline std::vector<Move> partner_moves(u64 k, SignMode mode, PrimeTable& table,
                                       CutCache* cache = nullptr) {
    if (k == 0) throw domain_error("partners are defined on positive integers");
    const auto factors = table.factorize(k);
    if (mode == SignMode::mobius && !is_squarefree(factors))
        throw domain_error(std::to_string(k) + " is not squarefree");
    std::vector<Move> out;
    auto accept = [&](u64 l) { return l < k && in_universe(l, mode, table); };

    for (const auto& [q, e] : factors) {
        if (q < 3) continue;
        for (const CutPair& c : cuts(q, table, cache)) {
            // l = (k / q) * s * r; compared in 128 bits as it may exceed k
            const unsigned __int128 l = static_cast<unsigned __int128>(k / q) * c.detached * c.remaining;
            if (l >= k) continue;
            if (accept(static_cast<u64>(l)))
                out.push_back({MoveKind::cut, q, 0, c, static_cast<u64>(l)});
        }
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
        for (std::size_t j = i; j < factors.size(); ++j) {
            const u64 q = factors[i].prime;
            const u64 r = factors[j].prime;
            if (i == j && (factors[i].multiplicity < 2 || mode == SignMode::mobius)) continue;
            const u64 l = checked_mul(k / (q * r), fuse(q, r, table));
            if (accept(l)) out.push_back({MoveKind::fusion, q, r, {0, 0}, l});
        }
    }
    return out;
}

/// Distinct partners l < k with opposite sign, ascending.
inline std::vector<u64> partner_candidates(u64 k, SignMode mode, PrimeTable& table,
                                           CutCache* cache = nullptr) {
    std::vector<u64> out;
    for (const Move& m : partner_moves(k, mode, table, cache)) out.push_back(m.result);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct PairingReport {
    u64 N = 0;
    SignMode mode = SignMode::liouville;
    std::optional<Policy> policy;  ///< empty for hand-written pairings
    std::vector<std::pair<u64, u64>> pairs;  ///< (k, l), l < k
    std::vector<u64> singletons;
    i64 bound = 0;
    i64 exact = 0;
    std::vector<Move> move_log;  ///< empty, or aligned with pairs
};

inline i64 signed_sum(const std::vector<u64>& values, SignMode mode, PrimeTable& table) {
    i64 s = 0;
    for (u64 v : values) s += sign_of(v, mode, table);
    return s;
}

/// Greedy descending pairing of the universe of [1, N].
inline PairingReport pair_range(u64 N, SignMode mode, Policy policy, PrimeTable& table) {
    if (N == 0) throw domain_error("pairing needs N >= 1");
    PairingReport r;
    r.N = N;
    r.mode = mode;
    r.policy = policy;
    std::vector<char> taken(N + 1, 0);
    CutCache cache;
    for (u64 k = N; k >= 2; --k) {
        if (taken[k] || !in_universe(k, mode, table)) continue;
        const std::vector<Move> moves = partner_moves(k, mode, table, &cache);
        const Move* pick = nullptr;
        for (const Move& m : moves) {
            if (taken[m.result]) continue;
            if (!pick || (policy == Policy::largest && m.result > pick->result) ||
                (policy == Policy::smallest && m.result < pick->result))
                pick = &m;
            if (policy == Policy::first) break;
        }
        if (!pick) continue;
        taken[k] = taken[pick->result] = 1;
        r.pairs.emplace_back(k, pick->result);
        r.move_log.push_back(*pick);
    }
    for (u64 n = 1; n <= N; ++n)
        if (!taken[n] && in_universe(n, mode, table)) r.singletons.push_back(n);
    r.bound = std::llabs(signed_sum(r.singletons, mode, table));
    r.exact = summatory(N, mode, table);
    return r;
}

struct Validation {
    bool ok = true;
    std::vector<std::string> diagnostics;

    void fail(std::string msg) {
        ok = false;
        diagnostics.push_back(std::move(msg));
    }
};

/// Re-runs one logged move from k and checks that it lands on l.
inline bool replay_move(u64 k, u64 l, const Move& m, SignMode mode, PrimeTable& table) {
    if (m.result != l) return false;
    if (m.kind == MoveKind::cut) {
        if (m.factor < 3 || !table.is_prime(m.factor) || k % m.factor != 0) return false;
        const auto all = cuts(m.factor, table);
        if (!std::binary_search(all.begin(), all.end(), m.cut)) return false;
        return static_cast<unsigned __int128>(k / m.factor) * m.cut.detached * m.cut.remaining == l;
    }
    const u64 q = m.factor;
    const u64 r = m.other;
    if (q > r || !table.is_prime(q) || !table.is_prime(r)) return false;
    if (q == r && mode == SignMode::mobius) return false;
    if (k % q != 0 || (k / q) % r != 0) return false;
    return checked_mul(k / (q * r), fuse(q, r, table)) == l;
}

inline Validation validate_report(const PairingReport& r, PrimeTable& table) {
    Validation v;
    const std::string mode(to_string(r.mode));
    if (r.N == 0) {
        v.fail("N must be positive");
        return v;
    }
    std::vector<unsigned> seen(r.N + 1, 0);
    auto note = [&](u64 n, const std::string& where) {
        if (n == 0 || n > r.N) {
            v.fail(where + ": " + std::to_string(n) + " is outside [1, " + std::to_string(r.N) + "]");
            return false;
        }
        if (++seen[n] == 2) v.fail(std::to_string(n) + " appears more than once");
        if (!in_universe(n, r.mode, table)) {
            v.fail(where + ": " + std::to_string(n) + " is not squarefree");
            return false;
        }
        return true;
    };

    for (const auto& [k, l] : r.pairs) {
        const std::string where = "pair (" + std::to_string(k) + ", " + std::to_string(l) + ")";
        if (!(l < k)) v.fail(where + ": partner is not smaller");
        const bool ok_k = note(k, where);
        const bool ok_l = note(l, where);
        if (ok_k && ok_l && sign_of(k, r.mode, table) + sign_of(l, r.mode, table) != 0)
            v.fail(where + ": " + mode + " signs do not cancel");
    }
    for (u64 s : r.singletons) note(s, "singleton");

    for (u64 n = 1; n <= r.N; ++n)
        if (!seen[n] && in_universe(n, r.mode, table))
            v.fail(std::to_string(n) + " is neither paired nor a singleton");

    const i64 singles = signed_sum(r.singletons, r.mode, table);
    if (r.bound != std::llabs(singles))
        v.fail("bound " + std::to_string(r.bound) + " differs from |sum over singletons| = " +
               std::to_string(std::llabs(singles)));
    const i64 exact = summatory(r.N, r.mode, table);
    if (r.exact != exact)
        v.fail("exact " + std::to_string(r.exact) + " differs from direct sum " + std::to_string(exact));
    if (std::llabs(exact) > r.bound)
        v.fail("|" + std::to_string(exact) + "| exceeds bound " + std::to_string(r.bound));

    if (!r.move_log.empty()) {
        if (r.move_log.size() != r.pairs.size()) {
            v.fail("move_log has " + std::to_string(r.move_log.size()) + " entries for " +
                   std::to_string(r.pairs.size()) + " pairs");
        } else {
            for (std::size_t i = 0; i < r.pairs.size(); ++i) {
                const auto [k, l] = r.pairs[i];
                bool ok = false;
                try {
                    ok = replay_move(k, l, r.move_log[i], r.mode, table);
                } catch (const domain_error&) {
                    ok = false;
                }
                if (!ok)
                    v.fail("pair (" + std::to_string(k) + ", " + std::to_string(l) +
                           "): logged move does not reproduce the partner");
            }
        }
    }
    return v;
}

/// Hand-written pair list: "k l" per line, a lone integer declares a singleton,
/// '#' starts a comment. Integers of the universe not mentioned become singletons.
inline PairingReport load_pairing_fixture(std::istream& in, u64 N, SignMode mode, PrimeTable& table) {
    if (N == 0) throw domain_error("pairing needs N >= 1");
    PairingReport r;
    r.N = N;
    r.mode = mode;
    std::vector<char> mentioned(N + 1, 0);
    auto mark = [&](u64 n) {
        if (n >= 1 && n <= N) mentioned[n] = 1;
    };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<u64> values;
        std::string token;
        while (fields >> token) {
            if (token.find_first_not_of("0123456789") != std::string::npos)
                throw domain_error("fixture line " + std::to_string(line_no) + ": bad integer '" + token + "'");
            values.push_back(std::stoull(token));
        }
        if (values.empty()) continue;
        if (values.size() > 2)
            throw domain_error("fixture line " + std::to_string(line_no) + ": expected one or two integers");
        if (values.size() == 2) {
            r.pairs.emplace_back(values[0], values[1]);
            mark(values[0]);
            mark(values[1]);
        } else {
            r.singletons.push_back(values[0]);
            mark(values[0]);
        }
    }
    for (u64 n = 1; n <= N; ++n)
        if (!mentioned[n] && in_universe(n, mode, table)) r.singletons.push_back(n);
    std::sort(r.singletons.begin(), r.singletons.end());
    r.bound = std::llabs(signed_sum(r.singletons, mode, table));
    r.exact = summatory(N, mode, table);
    return r;
}

inline nlohmann::ordered_json to_json(const Move& m) {
    nlohmann::ordered_json j;
    if (m.kind == MoveKind::cut) {
        j["kind"] = "cut";
        j["factor"] = m.factor;
        j["detached"] = m.cut.detached;
        j["remaining"] = m.cut.remaining;
    } else {
        j["kind"] = "fusion";
        j["factors"] = {m.factor, m.other};
    }
    return j;
}

inline nlohmann::ordered_json to_json(const PairingReport& r) {
    nlohmann::ordered_json j;
    j["N"] = r.N;
    j["mode"] = to_string(r.mode);
    j["policy"] = r.policy ? std::string(to_string(*r.policy)) : std::string("fixture");
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& [k, l] : r.pairs) j["pairs"].push_back({k, l});
    j["singletons"] = r.singletons;
    j["bound"] = r.bound;
    j["exact"] = r.exact;
    if (!r.move_log.empty()) {
        j["move_log"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < r.move_log.size(); ++i) j["move_log"].push_back(to_json(r.move_log[i]));
    }
    return j;
}

inline PairingReport pairing_from_json(const nlohmann::json& j) {
    try {
        PairingReport r;
        r.N = j.at("N").get<u64>();
        r.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("policy")) {
            const auto p = j.at("policy").get<std::string>();
            if (p != "fixture") r.policy = parse_policy(p);
        }
        for (const auto& p : j.at("pairs")) r.pairs.emplace_back(p.at(0).get<u64>(), p.at(1).get<u64>());
        r.singletons = j.at("singletons").get<std::vector<u64>>();
        r.bound = j.at("bound").get<i64>();
        r.exact = j.at("exact").get<i64>();
        if (j.contains("move_log")) {
            for (const auto& m : j.at("move_log")) {
                Move mv{};
                const auto kind = m.at("kind").get<std::string>();
                if (kind == "cut") {
                    mv.kind = MoveKind::cut;
                    mv.factor = m.at("factor").get<u64>();
                    mv.cut = {m.at("detached").get<u64>(), m.at("remaining").get<u64>()};
                } else if (kind == "fusion") {
                    mv.kind = MoveKind::fusion;
                    mv.factor = m.at("factors").at(0).get<u64>();
                    mv.other = m.at("factors").at(1).get<u64>();
                } else {
                    throw domain_error("unknown move kind '" + kind + "'");
                }
                r.move_log.push_back(mv);
            }
            // results are implied by the pair list
            for (std::size_t i = 0; i < r.move_log.size() && i < r.pairs.size(); ++i)
                r.move_log[i].result = r.pairs[i].second;
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("malformed pairing report: ") + e.what());
    }
}

} // namespace matula
