#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmt/density.hpp"
#include "qmt/graph.hpp"

namespace qmt {

/// Family of two-body marginals indexed by unordered label pairs. Pair
/// operators are stored with their two subsystems in the global layout's
/// order; keys follow the same convention. Construction verifies the
/// single-node overlap consistency across pairs.
struct MarginalSet {
    SystemLayout layout;
    std::map<Edge, DensityOperator> pairs;  // key = (first, second) in layout order
    double consistency_tol = 1e-8;
    std::map<std::string, double> node_consistency;  // max pairwise marginal distance

    Edge key_of(const std::string& a, const std::string& b) const {
        if (a == b) throw std::invalid_argument("MarginalSet: pair endpoints coincide");
        return layout.index_of(a) < layout.index_of(b) ? Edge{a, b} : Edge{b, a};
    }

    bool has_pair(const std::string& a, const std::string& b) const {
        return pairs.count(key_of(a, b)) > 0;
    }

    const DensityOperator& pair_of(const std::string& a, const std::string& b) const {
        const auto it = pairs.find(key_of(a, b));
        if (it == pairs.end()) {
            throw std::invalid_argument("MarginalSet: no marginal for pair {" + a + ", " + b + "}");
        }
        return it->second;
    }

    /// Single-node marginal, taken from the first pair containing the node.
    DensityOperator node_marginal(const std::string& label) const {
        for (const auto& [key, op] : pairs) {
            if (key.first == label || key.second == label) {
                return marginal(op, {label});
            }
        }
        throw std::invalid_argument("MarginalSet: node '" + label + "' appears in no pair");
    }

    AssociatedGraph graph() const {
        std::vector<Edge> edges;
        for (const auto& [key, op] : pairs) edges.push_back(normalized_edge(key.first, key.second));
        return make_graph(layout.labels(), edges);
    }
};

inline MarginalSet make_marginal_set(SystemLayout layout, std::vector<DensityOperator> pair_ops,
                                     double consistency_tol = 1e-8) {
    MarginalSet set;
    set.layout = std::move(layout);
    set.consistency_tol = consistency_tol;
    for (auto& op : pair_ops) {
        if (op.layout.size() != 2) {
            throw std::invalid_argument("make_marginal_set: operator on " + op.layout.to_string() +
                                        " is not two-body");
        }
        const std::string la = op.layout.part(0).label;
        const std::string lb = op.layout.part(1).label;
        for (const auto& p : op.layout.parts()) {
            if (!set.layout.contains(p.label) || set.layout.dim_of(p.label) != p.dim) {
                throw std::invalid_argument("make_marginal_set: subsystem '" + p.label +
                                            "' absent from or mismatched in the layout");
            }
        }
        const Edge key = set.key_of(la, lb);
        if (key.first != la) {  // permute into layout order
            LabeledOperator perm = permute_subsystems(op.labeled(), {key.first, key.second});
            op = make_density(std::move(perm.mat), std::move(perm.layout),
                              {op.herm_tol, op.psd_tol, op.trace_tol});
        }
        if (!set.pairs.emplace(key, std::move(op)).second) {
            throw std::invalid_argument("make_marginal_set: duplicate pair {" + key.first + ", " +
                                        key.second + "}");
        }
    }

    // Eq.-(1) style consistency on single-node overlaps
    for (const auto& label : set.layout.labels()) {
        std::vector<DensityOperator> views;
        for (const auto& [key, op] : set.pairs) {
            if (key.first == label || key.second == label) {
                views.push_back(marginal(op, {label}));
            }
        }
        double worst = 0.0;
        for (size_t i = 0; i < views.size(); ++i) {
            for (size_t j = i + 1; j < views.size(); ++j) {
                worst = std::max(worst, trace_distance(views[i], views[j]));
            }
        }
        if (!views.empty()) set.node_consistency[label] = worst;
        if (worst > consistency_tol) {
            throw std::invalid_argument("make_marginal_set: node '" + label +
                                        "' has inconsistent single-node marginals (distance " +
                                        std::to_string(worst) + ")");
        }
    }
    return set;
}

inline AssociatedGraph associated_graph(const MarginalSet& set) { return set.graph(); }

/// Complete pairwise marginal family of a global state.
inline MarginalSet all_pair_marginals(const DensityOperator& rho, double consistency_tol = 1e-8) {
    std::vector<DensityOperator> ops;
    const auto labels = rho.layout.labels();
    for (size_t i = 0; i < labels.size(); ++i) {
        for (size_t j = i + 1; j < labels.size(); ++j) {
            ops.push_back(marginal(rho, {labels[i], labels[j]}));
        }
    }
    return make_marginal_set(rho.layout, std::move(ops), consistency_tol);
}

/// Marginals of `rho` on the given edges only.
inline MarginalSet marginals_on_edges(const DensityOperator& rho, const std::vector<Edge>& edges,
                                      double consistency_tol = 1e-8) {
    std::vector<DensityOperator> ops;
    for (const auto& [a, b] : edges) ops.push_back(marginal(rho, {a, b}));
    return make_marginal_set(rho.layout, std::move(ops), consistency_tol);
}

}  // namespace qmt
