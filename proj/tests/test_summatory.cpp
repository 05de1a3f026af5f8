#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "matula/arborification.hpp"
#include "matula/summatory.hpp"
#include "oracle.hpp"

using namespace matula;

namespace {
PairingReport load(const std::string& rel, u64 N, SignMode mode, PrimeTable& t) {
    std::ifstream in(oracle::data_path(rel));
    return load_pairing_fixture(in, N, mode, t);
}

bool mentions(const std::vector<std::string>& diags, const std::string& needle) {
    for (const auto& d : diags)
        if (d.find(needle) != std::string::npos) return true;
    return false;
}
} // namespace

TEST(Summatory, SignFunctions) {
    PrimeTable t;
    for (u64 k = 1; k <= 5000; ++k) {
        EXPECT_EQ(mobius(k, t), oracle::mobius(k));
        EXPECT_EQ(liouville(k, t), oracle::liouville(k));
    }
}

TEST(Summatory, DirectSumsMatchNaive) {
    PrimeTable t;
    i64 m = 0, l = 0;
    for (u64 n = 1; n <= 3000; ++n) {
        m += oracle::mobius(n);
        l += oracle::liouville(n);
        if (n % 97 == 0 || n < 50) {
            EXPECT_EQ(summatory(n, SignMode::mobius, t), m) << n;
            EXPECT_EQ(summatory(n, SignMode::liouville, t), l) << n;
        }
    }
}

TEST(Summatory, KnownValues) {
    PrimeTable t;
    EXPECT_EQ(summatory(1000, SignMode::mobius, t), 2);
    EXPECT_EQ(summatory(96, SignMode::liouville, t), 0);
    EXPECT_EQ(summatory(1000, SignMode::liouville, t), -14);
    EXPECT_EQ(summatory(1000000, SignMode::mobius, t), 212);
    EXPECT_EQ(summatory(1000000, SignMode::liouville, t), -530);
    EXPECT_THROW(summatory(0, SignMode::mobius, t), domain_error);
}

TEST(Summatory, PartnersMatchOneMoveForests) {
    PrimeTable t;
    for (SignMode mode : {SignMode::liouville, SignMode::mobius})
        for (u64 k = 1; k <= 100; ++k) {
            if (mode == SignMode::mobius && !oracle::squarefree(k)) {
                EXPECT_THROW(partner_candidates(k, mode, t), domain_error);
                continue;
            }
            std::set<u64> brute;
            for (const Forest& f : oracle::one_move_forests(arborify(k, t))) {
                const u64 l = number_of(f, t);
                if (l < k && (mode == SignMode::liouville || oracle::squarefree(l))) brute.insert(l);
            }
            const auto got = partner_candidates(k, mode, t);
            EXPECT_EQ(std::vector<u64>(brute.begin(), brute.end()), got) << k;
        }
}

TEST(Summatory, MovesFlipTheSign) {
    PrimeTable t;
    for (SignMode mode : {SignMode::liouville, SignMode::mobius})
        for (u64 k = 2; k <= 2000; ++k) {
            if (mode == SignMode::mobius && !oracle::squarefree(k)) continue;
            for (const Move& m : partner_moves(k, mode, t)) {
                EXPECT_LT(m.result, k);
                // a cut adds a prime factor, a fusion removes one
                const unsigned expected = m.kind == MoveKind::cut ? oracle::omega(k) + 1 : oracle::omega(k) - 1;
                EXPECT_EQ(oracle::omega(m.result), expected) << k << " " << m.result;
                EXPECT_EQ(sign_of(m.result, mode, t), -sign_of(k, mode, t));
                EXPECT_TRUE(replay_move(k, m.result, m, mode, t));
            }
        }
}

TEST(Summatory, HandPairsAreCandidates) {
    PrimeTable t;
    auto has = [&](u64 k, u64 l, SignMode mode) {
        const auto c = partner_candidates(k, mode, t);
        return std::find(c.begin(), c.end(), l) != c.end();
    };
    EXPECT_TRUE(has(998, 499, SignMode::mobius));
    EXPECT_TRUE(has(38, 28, SignMode::liouville));
    EXPECT_TRUE(has(17, 10, SignMode::mobius));
    EXPECT_TRUE(has(7, 6, SignMode::mobius));
    EXPECT_FALSE(has(5, 6, SignMode::mobius));
    EXPECT_TRUE(partner_candidates(1, SignMode::liouville, t).empty());
    EXPECT_TRUE(partner_candidates(2, SignMode::liouville, t).empty());
}

TEST(Summatory, GreedyPairingIsValidForEveryPolicy) {
    PrimeTable t;
    for (SignMode mode : {SignMode::liouville, SignMode::mobius})
        for (Policy p : {Policy::largest, Policy::smallest, Policy::first})
            for (u64 N : {1u, 2u, 10u, 96u, 199u, 1000u, 2000u}) {
                const PairingReport r = pair_range(N, mode, p, t);
                const Validation v = validate_report(r, t);
                EXPECT_TRUE(v.ok) << N << (v.diagnostics.empty() ? "" : v.diagnostics.front());
                EXPECT_GE(r.bound, std::llabs(r.exact));
                EXPECT_EQ(r.bound, std::llabs(r.exact));
                EXPECT_EQ(r.exact, summatory(N, mode, t));
                EXPECT_EQ(r.singletons.front(), 1u);
                EXPECT_EQ(r.move_log.size(), r.pairs.size());
            }
}

TEST(Summatory, PairingIsDeterministic) {
    PrimeTable t;
    const auto a = to_json(pair_range(500, SignMode::mobius, Policy::smallest, t)).dump();
    const auto b = to_json(pair_range(500, SignMode::mobius, Policy::smallest, t)).dump();
    EXPECT_EQ(a, b);
}

TEST(Summatory, ValidatorRejectsBrokenReports) {
    PrimeTable t;
    PairingReport good = pair_range(100, SignMode::liouville, Policy::largest, t);
    ASSERT_TRUE(validate_report(good, t).ok);

    PairingReport dup = good;
    dup.pairs[1].second = dup.pairs[0].second;
    EXPECT_FALSE(validate_report(dup, t).ok);

    PairingReport same_sign = good;
    same_sign.move_log.clear();
    same_sign.pairs[0] = {6, 4};  // both have two prime factors
    const Validation v = validate_report(same_sign, t);
    EXPECT_FALSE(v.ok);
    EXPECT_TRUE(mentions(v.diagnostics, "signs do not cancel"));

    PairingReport bad_bound = good;
    bad_bound.bound += 2;
    EXPECT_FALSE(validate_report(bad_bound, t).ok);

    PairingReport bad_move = good;
    bad_move.move_log[0].factor = 2;
    bad_move.move_log[0].kind = MoveKind::cut;
    EXPECT_FALSE(validate_report(bad_move, t).ok);

    PairingReport not_squarefree = pair_range(100, SignMode::mobius, Policy::largest, t);
    not_squarefree.singletons.push_back(4);
    EXPECT_FALSE(validate_report(not_squarefree, t).ok);
}

TEST(Summatory, JsonRoundTrip) {
    PrimeTable t;
    const PairingReport r = pair_range(200, SignMode::mobius, Policy::first, t);
    const auto j = to_json(r);
    EXPECT_EQ(j["policy"], "first");
    EXPECT_EQ(j["mode"], "mobius");
    const PairingReport back = pairing_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(to_json(back).dump(), j.dump());
    EXPECT_TRUE(validate_report(back, t).ok);
}

TEST(Summatory, HandLiouville96IsValid) {
    PrimeTable t;
    const PairingReport r = load("fixtures/hand_pairs_liouville_96.txt", 96, SignMode::liouville, t);
    const Validation v = validate_report(r, t);
    EXPECT_TRUE(v.ok);
    EXPECT_EQ(r.pairs.size(), 48u);
    EXPECT_TRUE(r.singletons.empty());
    EXPECT_EQ(r.exact, 0);
    EXPECT_EQ(to_json(r)["policy"], "fixture");
}

TEST(Summatory, HandMobius199HasDuplicates) {
    PrimeTable t;
    const PairingReport r = load("fixtures/hand_pairs_mobius_199.txt", 199, SignMode::mobius, t);
    const Validation v = validate_report(r, t);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.diagnostics.size(), 2u);
    EXPECT_TRUE(mentions(v.diagnostics, "30 appears more than once"));
    EXPECT_TRUE(mentions(v.diagnostics, "58 appears more than once"));
    EXPECT_EQ(r.exact, -8);
}

TEST(Summatory, HandMobius1000Violations) {
    PrimeTable t;
    const PairingReport r = load("fixtures/hand_pairs_mobius_1000.txt", 1000, SignMode::mobius, t);
    const Validation v = validate_report(r, t);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(r.exact, 2);
    for (u64 n : {28u, 207u, 297u, 414u, 594u})
        EXPECT_TRUE(mentions(v.diagnostics, std::to_string(n) + " is not squarefree")) << n;
    for (u64 n : {29u, 37u, 165u, 663u})
        EXPECT_TRUE(mentions(v.diagnostics, std::to_string(n) + " appears more than once")) << n;
    // integers the tables never mention count as unpaired
    for (u64 n : {158u, 178u, 193u, 653u})
        EXPECT_TRUE(std::binary_search(r.singletons.begin(), r.singletons.end(), n)) << n;
}

TEST(Summatory, HandLiouville1000Violations) {
    PrimeTable t;
    const PairingReport r = load("fixtures/hand_pairs_liouville_1000.txt", 1000, SignMode::liouville, t);
    const Validation v = validate_report(r, t);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(r.exact, -14);
    EXPECT_TRUE(mentions(v.diagnostics, "pair (431, 162): liouville signs do not cancel"));
    for (u64 n : {1u, 126u, 749u}) EXPECT_TRUE(mentions(v.diagnostics, std::to_string(n) + " appears more than once"));
}

TEST(Summatory, FixtureParserRejectsGarbage) {
    PrimeTable t;
    std::istringstream bad("12 6\n7 x\n");
    EXPECT_THROW(load_pairing_fixture(bad, 12, SignMode::liouville, t), domain_error);
    std::istringstream three("12 6 3\n");
    EXPECT_THROW(load_pairing_fixture(three, 12, SignMode::liouville, t), domain_error);
}
