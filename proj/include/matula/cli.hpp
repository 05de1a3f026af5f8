#pragma once

/**
 * @file cli.hpp
 * @brief The `matula` command line, as a function so tests can drive it.
 *
 * Exit codes: 0 success, 2 usage error, 3 domain error, 4 prime cap overflow.
 */

#include <algorithm>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matula/arborification.hpp"
#include "matula/forest.hpp"
#include "matula/nap.hpp"
#include "matula/primes.hpp"
#include "matula/summatory.hpp"
#include "matula/verify.hpp"

namespace matula::cli {

enum exit_code : int { ok = 0, usage = 2, domain = 3, overflow = 4 };

namespace detail {

using json = nlohmann::ordered_json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The report was printed; only the exit status remains.
struct validation_failed {};

template <class Range>
std::string join(const Range& values, const char* sep = " ") {
    std::ostringstream s;
    bool first = true;
    for (const auto& v : values) {
        if (!first) s << sep;
        first = false;
        s << v;
    }
    return s.str();
}

inline void add_format(CLI::App* sub, std::string& format, bool allow_dot) {
    std::vector<std::string> allowed{"text", "json"};
    if (allow_dot) allowed.emplace_back("dot");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember(allowed))
        ->capture_default_str();
}

} // namespace detail

/// Subcommand names, in help order.
inline std::vector<std::string> subcommands() {
    return {"arborify",  "number-of",   "stats",     "degree-list", "leaf-class",
            "butcher",   "fuse",        "fuse-all",  "nap",         "cuts",
            "table",     "ratio-table", "scan",      "constellation", "summatory",
            "mobius",    "liouville",   "partners",  "pair",        "validate-pairs",
            "prime",     "rank",        "factor",    "is-prime",    "b-plus",
            "b-minus",   "render"};
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using detail::json;
    using detail::join;

    CLI::App app{"Arborification of the integers: forests, products, cuts and prime scans", "matula"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    u64 cap = PrimeTable::default_cap;
    std::string cache_path;
    app.add_option("--cap", cap, "Largest prime the table may sieve to")->capture_default_str();
    app.add_option("--prime-cache", cache_path, "Binary prime cache file (read, then updated)");

    std::optional<PrimeTable> table_slot;
    auto table = [&]() -> PrimeTable& { return *table_slot; };
    std::vector<std::pair<CLI::App*, std::function<void()>>> actions;
    auto command = [&](const std::string& name, const std::string& about, std::function<void()> act) {
        CLI::App* sub = app.add_subcommand(name, about);
        actions.emplace_back(sub, std::move(act));
        return sub;
    };
    auto number_label = [&](const Tree& t) { return std::to_string(number_of(t, table())); };
    auto emit_forest = [&](const Forest& f, const std::string& format, bool ascii, bool labels, json j) {
        const VertexLabel label = labels ? VertexLabel(number_label) : VertexLabel();
        if (format == "json") {
            out << j.dump() << '\n';
        } else if (format == "dot") {
            out << render_dot(f, label);
        } else if (ascii) {
            out << render_ascii(f, label);
        } else {
            out << print_forest(f) << '\n';
        }
    };

    // arborify N
    u64 n_arg = 0;
    std::string format = "text";
    bool ascii = false;
    bool labels = false;
    {
        auto* sub = command("arborify", "Forest of N as brackets, ASCII art, JSON or DOT", [&] {
            const Forest f = arborify(n_arg, table());
            emit_forest(f, format, ascii, labels, json{{"n", n_arg}, {"forest", print_forest(f)}});
        });
        sub->add_option("N", n_arg, "Positive integer")->required();
        detail::add_format(sub, format, true);
        sub->add_flag("--ascii", ascii, "Indented drawing instead of brackets");
        sub->add_flag("--labels", labels, "Label vertices with the number of their subtree");
    }

    std::string brackets;
    {
        auto* sub = command("number-of", "Integer of a bracket-string forest", [&] {
            const Forest f = parse_forest(brackets);
            const u64 n = number_of(f, table());
            if (format == "json")
                out << json{{"forest", print_forest(f)}, {"n", n}}.dump() << '\n';
            else
                out << n << '\n';
        });
        sub->add_option("brackets", brackets, "Forest such as \"[[]] []\"")->required();
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("render", "Draw a bracket-string forest", [&] {
            const Forest f = parse_forest(brackets);
            emit_forest(f, format, true, labels, json{{"forest", print_forest(f)}});
        });
        sub->add_option("brackets", brackets, "Forest such as \"[[]] []\"")->required();
        detail::add_format(sub, format, true);
        sub->add_flag("--labels", labels, "Label vertices with the number of their subtree");
    }
    {
        auto* sub = command("b-plus", "Join the trees of a forest under a new root", [&] {
            const Tree t = b_plus(parse_forest(brackets));
            emit_forest(Forest({t}), format, false, labels, json{{"tree", print_tree(t)}});
        });
        sub->add_option("brackets", brackets, "Forest")->required();
        detail::add_format(sub, format, true);
        sub->add_flag("--labels", labels, "Label vertices in DOT output");
    }
    {
        auto* sub = command("b-minus", "Remove the root of a tree", [&] {
            const Forest f = b_minus(parse_tree(brackets));
            emit_forest(f, format, false, labels, json{{"forest", print_forest(f)}});
        });
        sub->add_option("brackets", brackets, "Single tree")->required();
        detail::add_format(sub, format, true);
        sub->add_flag("--labels", labels, "Label vertices in DOT output");
    }
    {
        auto* sub = command("stats", "Vertices, edges, leaves, prime factors and degree of N", [&] {
            const Stats s = stats_of(n_arg, table());
            if (format == "json")
                out << json{{"n", n_arg}, {"v", s.v}, {"a", s.a}, {"f", s.f}, {"omega", s.omega},
                            {"delta", s.delta}}.dump()
                    << '\n';
            else
                out << "v=" << s.v << " a=" << s.a << " f=" << s.f << " omega=" << s.omega
                    << " delta=" << s.delta << '\n';
        });
        sub->add_option("N", n_arg, "Positive integer")->required();
        detail::add_format(sub, format, false);
    }

    auto emit_list = [&](const std::vector<u64>& values) {
        if (format == "json")
            out << json(values).dump() << '\n';
        else
            out << join(values) << '\n';
    };
    u64 max_arg = 0;
    {
        auto* sub = command("degree-list", "Every integer of degree M", [&] {
            emit_list(enumerate_degree(n_arg, table()));
        });
        sub->add_option("M", n_arg, "Degree")->required();
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("leaf-class", "Integers up to --max whose forest has F leaves", [&] {
            emit_list(enumerate_leaf_class(n_arg, max_arg, table()));
        });
        sub->add_option("F", n_arg, "Leaf count")->required();
        sub->add_option("--max", max_arg, "Upper end of the range")->required();
        detail::add_format(sub, format, false);
    }

    auto emit_value = [&](const char* key, u64 v) {
        if (format == "json")
            out << json{{key, v}}.dump() << '\n';
        else
            out << v << '\n';
    };
    std::vector<u64> primes_arg;
    {
        auto* sub = command("butcher", "Graft the tree of P onto the root of Q", [&] {
            emit_value("value", butcher(primes_arg[0], primes_arg[1], table()));
        });
        sub->add_option("primes", primes_arg, "Two primes P Q")->required()->expected(2);
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("fuse", "Merge the roots of two or more prime trees", [&] {
            u64 v = primes_arg[0];
            require_prime(v, table());
            for (std::size_t i = 1; i < primes_arg.size(); ++i) v = fuse(v, primes_arg[i], table());
            emit_value("value", v);
        });
        sub->add_option("primes", primes_arg, "Primes, fused left to right")->required()->expected(2, 64);
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("fuse-all", "Merge every tree of the forest of K into one", [&] {
            emit_value("value", fuse_all(n_arg, table()));
        });
        sub->add_option("K", n_arg, "Integer >= 2")->required();
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("nap", "Both sides of P<>(Q<>R) = Q<>(P<>R)", [&] {
            const u64 p = primes_arg[0], q = primes_arg[1], r = primes_arg[2];
            const u64 left = butcher(p, butcher(q, r, table()), table());
            const u64 right = butcher(q, butcher(p, r, table()), table());
            if (format == "json")
                out << json{{"left", left}, {"right", right}, {"holds", left == right}}.dump() << '\n';
            else
                out << left << ' ' << right << ' ' << (check_nap_law(p, q, r, table()) ? "holds" : "fails")
                    << '\n';
        });
        sub->add_option("primes", primes_arg, "Three primes P Q R")->required()->expected(3);
        detail::add_format(sub, format, false);
    }

    bool trace = false;
    {
        auto* sub = command("cuts", "Every edge cut of the tree of prime P", [&] {
            const auto traces = cut_traces(n_arg, table());
            if (format == "json") {
                json j = json::array();
                for (const auto& t : traces) {
                    json row{{"detached", t.pair.detached},
                             {"remaining", t.pair.remaining},
                             {"product", t.pair.product()}};
                    if (trace) row["chain"] = t.chain;
                    j.push_back(row);
                }
                out << j.dump() << '\n';
                return;
            }
            if (traces.empty()) {
                out << "no cuts\n";
                return;
            }
            for (const auto& t : traces) {
                out << t.pair.detached << '\t' << t.pair.remaining << '\t' << t.pair.product();
                if (trace) out << '\t' << join(t.chain, " -> ");
                out << '\n';
            }
        });
        sub->add_option("P", n_arg, "Prime")->required();
        sub->add_flag("--trace", trace, "Show the chain of primes reached while regrafting");
        detail::add_format(sub, format, false);
    }

    u64 from = 1, to = 20;
    {
        auto* sub = command("table", "n<TAB>brackets for every n in [--from, --to]", [&] {
            if (from == 0 || to < from) throw detail::usage_error("table needs 1 <= --from <= --to");
            for (u64 n = from; n <= to; ++n) out << n << '\t' << print_forest(arborify(n, table())) << '\n';
        });
        sub->add_option("--from", from, "First n")->capture_default_str();
        sub->add_option("--to", to, "Last n")->capture_default_str();
    }
    u64 k_arg = 0, l_arg = 0;
    {
        auto* sub = command("ratio-table", "p_k p_l / p_kl for 2 <= k <= K, 2 <= l <= L", [&] {
            const auto rows = ratio_table(k_arg, l_arg, table());
            if (format == "json") {
                json j = json::array();
                for (const auto& e : rows)
                    j.push_back({{"k", e.k}, {"l", e.l}, {"num", e.value.num}, {"den", e.value.den}});
                out << j.dump() << '\n';
            } else {
                for (const auto& e : rows)
                    out << e.k << '\t' << e.l << '\t' << e.value.num << '/' << e.value.den << '\n';
            }
        });
        sub->add_option("K", k_arg, "Largest k")->required();
        sub->add_option("L", l_arg, "Largest l")->required();
        detail::add_format(sub, format, false);
    }

    std::string scan_kind;
    std::optional<u64> a_max, m_max, n_max;
    unsigned threads = matula::detail::default_threads();
    bool timing = false;
    {
        auto* sub = command("scan", "Exhaustive inequality scan, reported as JSON", [&] {
            auto axis = [&](const std::optional<u64>& specific, const char* name) -> u64 {
                if (specific) return *specific;
                if (max_arg != 0) return max_arg;
                throw detail::usage_error(std::string("scan ") + scan_kind + " needs --max or --" + name);
            };
            ScanReport r;
            if (scan_kind == "pan-apn")
                r = scan_pan_apn(axis(a_max, "a-max"), axis(n_max, "n-max"), table(), threads);
            else if (scan_kind == "fusion")
                r = scan_fusion(axis(m_max, "m-max"), axis(n_max, "n-max"), table(), threads);
            else if (scan_kind == "mrd")
                r = scan_mrd_bounds(axis(n_max, "n-max"), table());
            else if (scan_kind == "sousselier")
                r = scan_sousselier(axis(n_max, "n-max"), table(), threads);
            else if (scan_kind == "three-n")
                r = scan_three_n(axis(n_max, "n-max"), table());
            else if (scan_kind == "butcher")
                r = scan_butcher_growth(axis(n_max, "n-max"), table());
            else if (scan_kind == "cuts")
                r = scan_cut_increase(axis(n_max, "n-max"), table());
            else if (scan_kind == "nap")
                r = scan_nap_law(axis(n_max, "n-max"), table());
            else
                r = check_lemma_tuple_consequence(axis(n_max, "n-max"), table());
            out << to_json(r, timing).dump() << '\n';
        });
        sub->add_option("kind", scan_kind, "Which scan")
            ->required()
            ->check(CLI::IsMember({"pan-apn", "fusion", "mrd", "sousselier", "three-n", "butcher", "cuts",
                                   "nap", "lemma-tuple"}));
        sub->add_option("--max", max_arg, "Upper end of every axis");
        sub->add_option("--a-max", a_max, "Upper end of a (pan-apn)");
        sub->add_option("--m-max", m_max, "Upper end of m (fusion)");
        sub->add_option("--n-max", n_max, "Upper end of n");
        sub->add_option("--threads", threads, "Worker threads for the parallel scans")
            ->check(CLI::Range(1u, 256u));
        sub->add_flag("--timing", timing, "Include elapsed_ms in the report");
    }
    {
        auto* sub = command("constellation", "Smallest diameter of an admissible K-tuple", [&] {
            const auto c = min_constellation_width(n_arg);
            if (format == "json")
                out << json{{"k", c.k}, {"width", c.width}, {"pattern", c.pattern}}.dump() << '\n';
            else
                out << c.width << '\t' << join(c.pattern) << '\n';
        });
        sub->add_option("K", n_arg, "Tuple size, 2..13")->required();
        detail::add_format(sub, format, false);
    }

    std::string mode = "liouville";
    std::string policy = "largest";
    auto add_mode = [&](CLI::App* sub) {
        return sub->add_option("--mode", mode, "Sign function")
            ->check(CLI::IsMember({"mobius", "liouville"}))
            ->capture_default_str();
    };
    {
        auto* sub = command("summatory", "M(N) or L(N) by direct summation", [&] {
            const i64 s = summatory(n_arg, parse_mode(mode), table());
            if (format == "json")
                out << json{{"N", n_arg}, {"mode", mode}, {"value", s}}.dump() << '\n';
            else
                out << s << '\n';
        });
        sub->add_option("N", n_arg, "Upper end")->required();
        add_mode(sub);
        detail::add_format(sub, format, false);
    }
    auto emit_sign = [&](int s) {
        if (format == "json")
            out << json{{"n", n_arg}, {"value", s}}.dump() << '\n';
        else
            out << s << '\n';
    };
    {
        auto* sub = command("mobius", "Moebius function of K", [&] { emit_sign(mobius(n_arg, table())); });
        sub->add_option("K", n_arg, "Positive integer")->required();
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("liouville", "Liouville function of K", [&] { emit_sign(liouville(n_arg, table())); });
        sub->add_option("K", n_arg, "Positive integer")->required();
        detail::add_format(sub, format, false);
    }
    bool moves = false;
    {
        auto* sub = command("partners", "Opposite-sign partners l < K reachable by one cut or fusion", [&] {
            const SignMode m = parse_mode(mode);
            if (moves) {
                json j = json::array();
                for (const Move& mv : partner_moves(n_arg, m, table())) {
                    json row = to_json(mv);
                    row["l"] = mv.result;
                    j.push_back(row);
                }
                out << j.dump() << '\n';
                return;
            }
            emit_list(partner_candidates(n_arg, m, table()));
        });
        sub->add_option("K", n_arg, "Positive integer")->required();
        add_mode(sub);
        sub->add_flag("--moves", moves, "List every move (JSON) instead of the distinct partners");
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("pair", "Greedy cut/fusion pairing of [1, N], reported as JSON", [&] {
            PairingReport r = pair_range(n_arg, parse_mode(mode), parse_policy(policy), table());
            if (!moves) r.move_log.clear();
            out << to_json(r).dump() << '\n';
        });
        sub->add_option("N", n_arg, "Upper end")->required();
        add_mode(sub);
        sub->add_option("--policy", policy, "Partner choice")
            ->check(CLI::IsMember({"largest", "smallest", "first"}))
            ->capture_default_str();
        sub->add_flag("--moves", moves, "Include the move that produced each pair");
    }
    std::string file;
    CLI::Option* validate_mode = nullptr;
    {
        auto* sub = command("validate-pairs",
                            "Check a pair list (\"k l\" lines) or a pair report; exit 3 when invalid", [&] {
            std::ifstream in(file);
            if (!in) throw domain_error("cannot read " + file);
            const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
            const bool is_json = text.find_first_not_of(" \t\r\n") != std::string::npos &&
                                 text[text.find_first_not_of(" \t\r\n")] == '{';
            PairingReport r;
            if (is_json) {
                nlohmann::json parsed;
                try {
                    parsed = nlohmann::json::parse(text);
                } catch (const nlohmann::json::exception& e) {
                    throw domain_error(std::string("malformed JSON: ") + e.what());
                }
                r = pairing_from_json(parsed);
            } else {
                if (max_arg == 0) throw detail::usage_error("validate-pairs needs --max for pair lists");
                std::istringstream lines(text);
                r = load_pairing_fixture(lines, max_arg, parse_mode(mode), table());
            }
            Validation v = validate_report(r, table());
            if (is_json && max_arg != 0 && max_arg != r.N)
                v.fail("report covers N = " + std::to_string(r.N) + ", expected " + std::to_string(max_arg));
            if (is_json && validate_mode->count() > 0 && parse_mode(mode) != r.mode)
                v.fail("report mode is " + std::string(to_string(r.mode)) + ", expected " + mode);
            out << json{{"valid", v.ok},
                        {"N", r.N},
                        {"mode", to_string(r.mode)},
                        {"pairs", r.pairs.size()},
                        {"singletons", r.singletons.size()},
                        {"bound", r.bound},
                        {"exact", r.exact},
                        {"diagnostics", v.diagnostics}}
                       .dump()
                << '\n';
            if (!v.ok) throw detail::validation_failed();
        });
        sub->add_option("FILE", file, "Pair list or JSON report")->required()->check(CLI::ExistingFile);
        sub->add_option("--max", max_arg, "N covered by a pair list");
        validate_mode = add_mode(sub);
    }

    {
        auto* sub = command("prime", "The N-th prime", [&] { emit_value("value", table().nth_prime(n_arg)); });
        sub->add_option("N", n_arg, "Rank, from 1")->required();
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("rank", "Rank of the prime Q", [&] { emit_value("rank", table().prime_rank(n_arg)); });
        sub->add_option("Q", n_arg, "Prime")->required();
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("factor", "Prime factorization of K", [&] {
            const auto f = table().factorize(n_arg);
            if (format == "json") {
                json j = json::array();
                for (const auto& [p, e] : f) j.push_back({p, e});
                out << j.dump() << '\n';
                return;
            }
            std::vector<std::string> terms;
            for (const auto& [p, e] : f) terms.push_back(e == 1 ? std::to_string(p) : std::to_string(p) + "^" + std::to_string(e));
            out << (terms.empty() ? std::string("1") : join(terms, " * ")) << '\n';
        });
        sub->add_option("K", n_arg, "Positive integer")->required();
        detail::add_format(sub, format, false);
    }
    {
        auto* sub = command("is-prime", "Primality of K", [&] {
            const bool p = table().is_prime(n_arg);
            if (format == "json")
                out << json{{"n", n_arg}, {"prime", p}}.dump() << '\n';
            else
                out << (p ? "true" : "false") << '\n';
        });
        sub->add_option("K", n_arg, "Integer")->required();
        detail::add_format(sub, format, false);
    }

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "matula: " << e.what() << '\n';
        return usage;
    }

    try {
        if (cap < 2) throw detail::usage_error("--cap must be at least 2");
        table_slot.emplace(PrimeTable::default_initial_limit, cap);
        std::size_t loaded_size = 0;
        if (!cache_path.empty() && table().load(cache_path)) loaded_size = table().size();
        for (auto& [sub, act] : actions)
            if (sub->parsed()) act();
        if (!cache_path.empty() && table().size() > loaded_size) table().save(cache_path);
        return ok;
    } catch (const detail::validation_failed&) {
        return domain;
    } catch (const detail::usage_error& e) {
        err << "matula: " << e.what() << '\n';
        return usage;
    } catch (const overflow_error& e) {
        err << "matula: " << e.what() << '\n';
        return overflow;
    } catch (const domain_error& e) {
        err << "matula: " << e.what() << '\n';
        return domain;
    }
}

} // namespace matula::cli
