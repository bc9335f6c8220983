#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qmt/markov_tree.hpp"

namespace qmt {

struct WeightedGraph {
    std::vector<std::string> nodes;
    std::map<Edge, double> weights;  // normalized edge keys, bits

    double weight_of(const std::string& a, const std::string& b) const {
        const auto it = weights.find(normalized_edge(a, b));
        if (it == weights.end()) {
            throw std::invalid_argument("WeightedGraph: missing pair {" + a + ", " + b + "}");
        }
        return it->second;
    }

    double total_weight(const std::vector<Edge>& edges) const {
        double s = 0.0;
        for (const auto& [a, b] : edges) s += weight_of(a, b);
        return s;
    }
};

/// Mutual-information edge weights over the complete graph, from a full
/// pairwise marginal family.
inline WeightedGraph mi_weights(const MarginalSet& set) {
    WeightedGraph g;
    g.nodes = set.layout.labels();
    std::map<std::string, double> node_entropy;
    for (const auto& node : g.nodes) {
        node_entropy[node] = von_neumann_entropy(set.node_marginal(node));
    }
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        for (size_t j = i + 1; j < g.nodes.size(); ++j) {
            if (!set.has_pair(g.nodes[i], g.nodes[j])) {
                throw std::invalid_argument("mi_weights: missing pair {" + g.nodes[i] + ", " +
                                            g.nodes[j] + "}");
            }
            const DensityOperator& pair = set.pair_of(g.nodes[i], g.nodes[j]);
            const double mi = node_entropy[g.nodes[i]] + node_entropy[g.nodes[j]] -
                              von_neumann_entropy(pair);
            g.weights[normalized_edge(g.nodes[i], g.nodes[j])] = mi;
        }
    }
    return g;
}

inline WeightedGraph mi_weights(const DensityOperator& rho) {
    return mi_weights(all_pair_marginals(rho));
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    size_t find(size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    bool unite(size_t a, size_t b) {
        const size_t ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent_[ra] = rb;
        return true;
    }

private:
    std::vector<size_t> parent_;
};

}  // namespace detail

/// Maximum-weight spanning tree by greedy edge insertion with union-find;
/// ties broken lexicographically on the edge labels, so the result is
/// deterministic.
inline AssociatedGraph max_spanning_tree(const WeightedGraph& g) {
    std::vector<std::pair<Edge, double>> edges(g.weights.begin(), g.weights.end());
    std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::map<std::string, size_t> index;
    for (size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = i;
    detail::UnionFind uf(g.nodes.size());
    std::vector<Edge> picked;
    for (const auto& [e, w] : edges) {
        if (uf.unite(index.at(e.first), index.at(e.second))) picked.push_back(e);
    }
    if (picked.size() + 1 != g.nodes.size()) {
        throw std::invalid_argument("max_spanning_tree: graph is disconnected");
    }
    return make_graph(g.nodes, picked);
}

struct ChowLiuResult {
    WeightedGraph weights;
    AssociatedGraph tree;
    TreeReconstruction reconstruction;
};

/// Quantum Chow-Liu: mutual-information weights, maximum spanning tree,
/// then Petz factorization along a constructive order of the learned tree.
inline ChowLiuResult quantum_chow_liu(const MarginalSet& set, double tol = 1e-8) {
    ChowLiuResult result;
    result.weights = mi_weights(set);
    result.tree = max_spanning_tree(result.weights);

    std::vector<DensityOperator> tree_pairs;
    for (const auto& [a, b] : result.tree.edges) tree_pairs.push_back(set.pair_of(a, b));
    const MarginalSet tree_set =
        make_marginal_set(set.layout, std::move(tree_pairs), set.consistency_tol);

    const std::string root =
        *std::min_element(result.tree.nodes.begin(), result.tree.nodes.end());
    try {
        result.reconstruction =
            petz_factorize(tree_set, constructive_order(result.tree, root), tol);
    } catch (const HypothesisError& e) {
        throw HypothesisError(std::string("quantum_chow_liu: selected tree is not QMC-"
                                          "compatible: ") + e.what());
    }
    return result;
}

struct DivergenceIdentity {
    double lhs = 0.0;  // S(rho_true || rho_tilde)
    double rhs = 0.0;  // S(rho_tilde) - S(rho_true)
    double residual = 0.0;
};

/// The tree-reconstruction divergence identity
/// S(rho || rho_T) = S(rho_T) - S(rho), valid when rho matches the tree's
/// two-body marginals.
inline DivergenceIdentity relative_entropy_gap(const DensityOperator& rho_true,
                                               const TreeReconstruction& rec,
                                               double tol = 1e-8) {
    double incompat = 0.0;
    for (size_t k = 1; k < rec.order.order.size(); ++k) {
        const std::string& x = rec.order.order[k];
        const std::string& y = rec.order.parent.at(x);
        incompat = std::max(incompat, marginal_distance(marginal(rho_true, {x, y}),
                                                        marginal(rec.rho, {x, y})));
    }
    if (incompat > std::max(1e-6, 10 * tol)) {
        throw std::invalid_argument("relative_entropy_gap: rho_true does not share the tree "
                                    "marginals (worst distance " + std::to_string(incompat) + ")");
    }
    DivergenceIdentity out;
    out.lhs = relative_entropy(rho_true, rec.rho);
    out.rhs = von_neumann_entropy(rec.rho) - von_neumann_entropy(rho_true);
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

/// Delta S = sum_edges S(rho_ij) - sum_i (deg_i - 1) S(rho_i) - S(rho_tilde).
/// Nonnegative, and zero exactly on Petz-factorizable states.
inline double delta_s(const MarginalSet& set_on_tree, const DensityOperator& rho_tilde,
                      double tol = 1e-8) {
    const AssociatedGraph g = set_on_tree.graph();
    if (!g.is_tree()) {
        throw HypothesisError("delta_s: associated graph is not a tree");
    }
    double incompat = 0.0;
    for (const auto& [key, op] : set_on_tree.pairs) {
        incompat = std::max(incompat,
                            marginal_distance(marginal(rho_tilde, {key.first, key.second}), op));
    }
    if (incompat > std::max(1e-6, 10 * tol)) {
        throw std::invalid_argument("delta_s: rho_tilde is not compatible with the set (worst "
                                    "marginal distance " + std::to_string(incompat) + ")");
    }
    return qmt_entropy_closed_form(set_on_tree, g) - von_neumann_entropy(rho_tilde);
}

struct BestTreeResult {
    AssociatedGraph tree;
    double divergence = 0.0;
    long trees_considered = 0;
    std::vector<AssociatedGraph> skipped;  // trees whose 3-chains failed the QMC check
};

/// Exhaustive argmin of S(rho || rho_T) over all n^{n-2} labeled spanning
/// trees; the oracle counterpart of quantum_chow_liu.
inline BestTreeResult brute_force_best_tree(const DensityOperator& rho, double tol = 1e-8) {
    const auto labels = rho.layout.labels();
    if (labels.size() > 5) {
        throw std::invalid_argument("brute_force_best_tree: capped at 5 nodes (n^{n-2} trees)");
    }
    const MarginalSet all = all_pair_marginals(rho);
    BestTreeResult best;
    bool have_best = false;
    for (const auto& tree : enumerate_labeled_trees(labels)) {
        ++best.trees_considered;
        std::vector<DensityOperator> pairs;
        for (const auto& [a, b] : tree.edges) pairs.push_back(all.pair_of(a, b));
        const MarginalSet set = make_marginal_set(rho.layout, std::move(pairs));
        TreeReconstruction rec;
        try {
            const std::string root = *std::min_element(tree.nodes.begin(), tree.nodes.end());
            rec = petz_factorize(set, constructive_order(tree, root), tol);
        } catch (const HypothesisError&) {
            best.skipped.push_back(tree);
            continue;
        }
        const double div = relative_entropy(rho, rec.rho);
        const bool better =
            !have_best || div < best.divergence - 1e-12 ||
            (std::abs(div - best.divergence) <= 1e-12 && tree.edges < best.tree.edges);
        if (better) {
            best.tree = tree;
            best.divergence = div;
            have_best = true;
        }
    }
    if (!have_best) {
        throw HypothesisError("brute_force_best_tree: no tree passed the QMC hypotheses");
    }
    return best;
}

}  // namespace qmt
