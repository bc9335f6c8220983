#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmt/errors.hpp"

namespace qmt {

using Edge = std::pair<std::string, std::string>;

inline Edge normalized_edge(const std::string& a, const std::string& b) {
    if (a == b) throw std::invalid_argument("edge endpoints coincide: '" + a + "'");
    return a < b ? Edge{a, b} : Edge{b, a};
}

/// One node per subsystem, one edge per two-body marginal. Edges are kept
/// normalized (lexicographically ordered endpoints) and sorted.
struct AssociatedGraph {
    std::vector<std::string> nodes;
    std::vector<Edge> edges;

    bool has_edge(const std::string& a, const std::string& b) const {
        return std::binary_search(edges.begin(), edges.end(), normalized_edge(a, b));
    }

    long degree(const std::string& v) const {
        long d = 0;
        for (const auto& e : edges) d += (e.first == v) + (e.second == v);
        return d;
    }

    std::vector<std::string> neighbors(const std::string& v) const {
        std::vector<std::string> out;
        for (const auto& e : edges) {
            if (e.first == v) out.push_back(e.second);
            if (e.second == v) out.push_back(e.first);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool is_connected() const {
        if (nodes.empty()) return true;
        std::set<std::string> seen{nodes.front()};
        std::deque<std::string> queue{nodes.front()};
        while (!queue.empty()) {
            const std::string v = queue.front();
            queue.pop_front();
            for (const auto& n : neighbors(v)) {
                if (seen.insert(n).second) queue.push_back(n);
            }
        }
        return seen.size() == nodes.size();
    }

    bool is_tree() const {
        return nodes.size() >= 1 && edges.size() + 1 == nodes.size() && is_connected();
    }
};

inline AssociatedGraph make_graph(std::vector<std::string> nodes, std::vector<Edge> edges) {
    std::set<std::string> known(nodes.begin(), nodes.end());
    if (known.size() != nodes.size()) {
        throw std::invalid_argument("make_graph: duplicate node label");
    }
    std::vector<Edge> norm;
    norm.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        if (!known.count(a) || !known.count(b)) {
            throw std::invalid_argument("make_graph: edge endpoint not among the nodes");
        }
        norm.push_back(normalized_edge(a, b));
    }
    std::sort(norm.begin(), norm.end());
    if (std::adjacent_find(norm.begin(), norm.end()) != norm.end()) {
        throw std::invalid_argument("make_graph: duplicate edge");
    }
    return {std::move(nodes), std::move(norm)};
}

inline AssociatedGraph path_graph(const std::vector<std::string>& nodes) {
    std::vector<Edge> edges;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) edges.push_back({nodes[i], nodes[i + 1]});
    return make_graph(nodes, edges);
}

inline AssociatedGraph star_graph(const std::string& center,
                                  const std::vector<std::string>& leaves) {
    std::vector<std::string> nodes{center};
    std::vector<Edge> edges;
    for (const auto& l : leaves) {
        nodes.push_back(l);
        edges.push_back({center, l});
    }
    return make_graph(nodes, edges);
}

inline AssociatedGraph complete_graph(const std::vector<std::string>& nodes) {
    std::vector<Edge> edges;
    for (size_t i = 0; i < nodes.size(); ++i) {
        for (size_t j = i + 1; j < nodes.size(); ++j) edges.push_back({nodes[i], nodes[j]});
    }
    return make_graph(nodes, edges);
}

/// Node ordering in which every node past the first attaches to exactly one
/// earlier node (its parent Y_k).
struct ConstructiveOrder {
    std::vector<std::string> order;
    std::map<std::string, std::string> parent;  // X_k -> Y_k, k >= 2
};

/// BFS from `root` with lexicographic tie-break among equal-depth children.
inline ConstructiveOrder constructive_order(const AssociatedGraph& g, const std::string& root) {
    if (!g.is_tree()) {
        throw HypothesisError("constructive_order: associated graph is not a tree");
    }
    if (std::find(g.nodes.begin(), g.nodes.end(), root) == g.nodes.end()) {
        throw std::invalid_argument("constructive_order: unknown root '" + root + "'");
    }
    ConstructiveOrder co;
    std::set<std::string> seen{root};
    std::deque<std::string> queue{root};
    while (!queue.empty()) {
        const std::string v = queue.front();
        queue.pop_front();
        co.order.push_back(v);
        for (const auto& n : g.neighbors(v)) {  // already sorted
            if (seen.insert(n).second) {
                co.parent[n] = v;
                queue.push_back(n);
            }
        }
    }
    return co;
}

/// An unordered 3-chain left - center - right (left < right).
struct ChainTriple {
    std::string left, center, right;

    friend bool operator<(const ChainTriple& a, const ChainTriple& b) {
        return std::tie(a.center, a.left, a.right) < std::tie(b.center, b.left, b.right);
    }
    friend bool operator==(const ChainTriple& a, const ChainTriple& b) {
        return std::tie(a.center, a.left, a.right) == std::tie(b.center, b.left, b.right);
    }

    std::string to_string() const { return left + " - " + center + " - " + right; }
};

/// Every 3-chain of the graph, each unordered chain listed once, sorted by
/// (center, left, right).
inline std::vector<ChainTriple> enumerate_3chains(const AssociatedGraph& g) {
    std::vector<ChainTriple> out;
    for (const auto& center : g.nodes) {
        const auto nb = g.neighbors(center);
        for (size_t i = 0; i < nb.size(); ++i) {
            for (size_t j = i + 1; j < nb.size(); ++j) {
                out.push_back({nb[i], center, nb[j]});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline long count_3chains_path(long n) { return n >= 2 ? n - 2 : 0; }
inline long count_3chains_star(long n) { return n >= 2 ? (n - 1) * (n - 2) / 2 : 0; }
inline long count_3chains_complete(long n) { return n * (n - 1) * (n - 2) / 2; }

/// Labeled tree from a Pruefer sequence (entries index into `nodes`).
inline AssociatedGraph tree_from_prufer(const std::vector<std::string>& nodes,
                                        const std::vector<long>& seq) {
    const long n = static_cast<long>(nodes.size());
    if (n < 2) throw std::invalid_argument("tree_from_prufer: need at least two nodes");
    if (static_cast<long>(seq.size()) != n - 2) {
        throw std::invalid_argument("tree_from_prufer: sequence must have n - 2 entries");
    }
    std::vector<long> degree(n, 1);
    for (long s : seq) {
        if (s < 0 || s >= n) throw std::invalid_argument("tree_from_prufer: index out of range");
        ++degree[static_cast<size_t>(s)];
    }
    std::vector<Edge> edges;
    std::set<long> leaves;
    for (long v = 0; v < n; ++v) {
        if (degree[static_cast<size_t>(v)] == 1) leaves.insert(v);
    }
    for (long s : seq) {
        const long leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.push_back(normalized_edge(nodes[static_cast<size_t>(leaf)],
                                        nodes[static_cast<size_t>(s)]));
        if (--degree[static_cast<size_t>(s)] == 1) leaves.insert(s);
    }
    const long u = *leaves.begin();
    const long v = *std::next(leaves.begin());
    edges.push_back(normalized_edge(nodes[static_cast<size_t>(u)], nodes[static_cast<size_t>(v)]));
    return make_graph(nodes, edges);
}

/// All n^{n-2} labeled spanning trees (Cayley), via Pruefer enumeration.
inline std::vector<AssociatedGraph> enumerate_labeled_trees(const std::vector<std::string>& nodes) {
    const long n = static_cast<long>(nodes.size());
    if (n < 2) throw std::invalid_argument("enumerate_labeled_trees: need at least two nodes");
    std::vector<AssociatedGraph> out;
    std::vector<long> seq(static_cast<size_t>(std::max(0L, n - 2)), 0);
    while (true) {
        out.push_back(tree_from_prufer(nodes, seq));
        long pos = static_cast<long>(seq.size()) - 1;
        while (pos >= 0 && seq[static_cast<size_t>(pos)] == n - 1) {
            seq[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++seq[static_cast<size_t>(pos)];
    }
    return out;
}

}  // namespace qmt
