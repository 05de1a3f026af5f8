#pragma once

/**
 * @file forest.hpp
 * @brief Canonical rooted trees and forests, bracket codec, ASCII/DOT output.
 *
 * A tree is stored as the sorted multiset of its root branches. Sorting is by
 * canonical bracket string ("[" children "]"), so isomorphic trees have
 * identical stored forms and comparison is a string comparison. A forest is a
 * sorted multiset of trees, printed as space-separated tree terms: the empty
 * forest prints as "", a single vertex as "[]", and {chain-2, vertex} as
 * "[[]] []".
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matula/errors.hpp"

namespace matula {

class Tree;

struct TreeStats {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t leaves = 0;

    TreeStats& operator+=(const TreeStats& o) {
        vertices += o.vertices;
        edges += o.edges;
        leaves += o.leaves;
        return *this;
    }
    friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

class Tree {
public:
    /// The single-vertex tree.
    Tree() : code_("[]"), vertices_(1) {}

    /// Root whose branches are `children`, in any order.
    explicit Tree(std::vector<Tree> children) : children_(std::move(children)) {
        std::sort(children_.begin(), children_.end());
        std::size_t len = 2;
        vertices_ = 1;
        for (const auto& c : children_) {
            len += c.code_.size();
            vertices_ += c.vertices_;
        }
        code_.reserve(len);
        code_ += '[';
        for (const auto& c : children_) code_ += c.code_;
        code_ += ']';
    }

    const std::vector<Tree>& children() const noexcept { return children_; }
    const std::string& code() const noexcept { return code_; }
    std::size_t vertex_count() const noexcept { return vertices_; }
    bool is_leaf() const noexcept { return children_.empty(); }

    friend bool operator==(const Tree& a, const Tree& b) { return a.code_ == b.code_; }
    friend std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
        return a.code_.compare(b.code_) <=> 0;
    }

private:
    std::vector<Tree> children_;
    std::string code_;
    std::size_t vertices_;
};

class Forest {
public:
    Forest() = default;
    explicit Forest(std::vector<Tree> trees) : trees_(std::move(trees)) {
        std::sort(trees_.begin(), trees_.end());
    }

    const std::vector<Tree>& trees() const noexcept { return trees_; }
    bool empty() const noexcept { return trees_.empty(); }
    std::size_t size() const noexcept { return trees_.size(); }

    /// Multiset union; the forest of a product is the union of the forests.
    friend Forest operator*(const Forest& a, const Forest& b) {
        Forest out;
        out.trees_.reserve(a.size() + b.size());
        std::merge(a.trees_.begin(), a.trees_.end(), b.trees_.begin(), b.trees_.end(),
                   std::back_inserter(out.trees_));
        return out;
    }

    friend bool operator==(const Forest&, const Forest&) = default;

private:
    std::vector<Tree> trees_;
};

/// Adds a common root below every tree of f.
inline Tree b_plus(Forest f) { return Tree(std::vector<Tree>(f.trees())); }

/// The forest of root branches of t.
inline Forest b_minus(const Tree& t) { return Forest(t.children()); }

inline std::string print_forest(const Forest& f) {
    std::string out;
    for (const auto& t : f.trees()) {
        if (!out.empty()) out += ' ';
        out += t.code();
    }
    return out;
}

inline std::string print_tree(const Tree& t) { return t.code(); }

namespace detail {
inline bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
} // namespace detail

/// Parses whitespace-separated tree terms; children may appear in any order.
inline Forest parse_forest(std::string_view s) {
    std::vector<Tree> top;
    // One frame per open bracket: the children collected so far.
    std::vector<std::vector<Tree>> stack;
    std::vector<std::size_t> opened_at;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '[') {
            stack.emplace_back();
            opened_at.push_back(i);
        } else if (c == ']') {
            if (stack.empty()) throw syntax_error("unmatched ']'", i);
            Tree t(std::move(stack.back()));
            stack.pop_back();
            opened_at.pop_back();
            (stack.empty() ? top : stack.back()).push_back(std::move(t));
        } else if (!detail::is_blank(c)) {
            throw syntax_error(std::string("unexpected character '") + c + "'", i);
        }
    }
    if (!stack.empty()) throw syntax_error("unclosed '['", opened_at.back());
    return Forest(std::move(top));
}

/// Parses exactly one tree term.
inline Tree parse_tree(std::string_view s) {
    Forest f = parse_forest(s);
    if (f.size() != 1)
        throw syntax_error("expected exactly one tree, found " + std::to_string(f.size()), 0);
    return f.trees().front();
}

inline TreeStats stats(const Tree& t) {
    TreeStats out;
    out.vertices = 1;
    if (t.is_leaf()) {
        out.leaves = 1;
        return out;
    }
    for (const auto& c : t.children()) out += stats(c);
    out.edges = out.vertices - 1;
    return out;
}

inline TreeStats stats(const Forest& f) {
    TreeStats out;
    for (const auto& t : f.trees()) out += stats(t);
    return out;
}

/// Optional per-vertex label for the renderers (receives the subtree at that vertex).
using VertexLabel = std::function<std::string(const Tree&)>;

namespace detail {
inline void ascii_lines(const Tree& t, std::size_t depth, const VertexLabel& label,
                        std::string& out) {
    out.append(2 * depth, ' ');
    out += label ? label(t) : "o";
    out += '\n';
    for (const auto& c : t.children()) ascii_lines(c, depth + 1, label, out);
}

inline void dot_nodes(const Tree& t, std::size_t component, std::size_t& next,
                      const VertexLabel& label, std::string& out) {
    const std::size_t id = next++;
    const std::string name = "t" + std::to_string(component) + "_" + std::to_string(id);
    out += "  " + name + " [label=\"" + (label ? label(t) : std::string()) + "\"];\n";
    for (const auto& c : t.children()) {
        const std::size_t child_id = next;
        dot_nodes(c, component, next, label, out);
        out += "  " + name + " -> t" + std::to_string(component) + "_" +
               std::to_string(child_id) + ";\n";
    }
}
} // namespace detail

/// Root first, two spaces of indentation per depth, trees separated by a blank line.
inline std::string render_ascii(const Forest& f, const VertexLabel& label = {}) {
    if (f.empty()) return "(empty forest)\n";
    std::string out;
    bool first = true;
    for (const auto& t : f.trees()) {
        if (!first) out += '\n';
        first = false;
        detail::ascii_lines(t, 0, label, out);
    }
    return out;
}

inline std::string render_ascii(const Tree& t, const VertexLabel& label = {}) {
    std::string out;
    detail::ascii_lines(t, 0, label, out);
    return out;
}

/// Graphviz digraph; node ids are t<component>_<preorder index>, edges root -> child.
inline std::string render_dot(const Forest& f, const VertexLabel& label = {}) {
    std::string out = "digraph forest {\n  node [shape=circle];\n";
    std::size_t component = 0;
    for (const auto& t : f.trees()) {
        std::size_t next = 0;
        detail::dot_nodes(t, component++, next, label, out);
    }
    out += "}\n";
    return out;
}

inline std::string render_dot(const Tree& t, const VertexLabel& label = {}) {
    return render_dot(Forest({t}), label);
}

} // namespace matula
