#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmt/entropy.hpp"
#include "qmt/errors.hpp"
#include "qmt/marginal_set.hpp"
#include "qmt/petz.hpp"

namespace qmt {

struct LocalConditionsReport {
    std::vector<std::pair<ChainTriple, QmcVerdict>> verdicts;  // enumerate_3chains order
    bool all_pass = true;
    double max_normality_residual = 0.0;

    const ChainTriple* first_failure() const {
        for (const auto& [chain, v] : verdicts) {
            if (!v.exists) return &chain;
        }
        return nullptr;
    }
};

/// Two-body realization of the per-3-chain CMI-zero conditions: for every
/// 3-chain i - j - k of the tree, run the Theta existence test on
/// {rho_ij, rho_jk}.
inline LocalConditionsReport local_qmc_conditions(const MarginalSet& set, double tol = 1e-8) {
    const AssociatedGraph g = set.graph();
    if (!g.is_tree()) {
        throw HypothesisError("local_qmc_conditions: associated graph is not a tree");
    }
    LocalConditionsReport report;
    for (const auto& chain : enumerate_3chains(g)) {
        const auto marg = make_three_chain(set.pair_of(chain.left, chain.center),
                                           set.pair_of(chain.center, chain.right),
                                           std::max(set.consistency_tol, tol));
        QmcVerdict v = qmc_exists(marg, tol);
        report.all_pass = report.all_pass && v.exists;
        report.max_normality_residual =
            std::max(report.max_normality_residual, v.normality_residual);
        report.verdicts.emplace_back(chain, std::move(v));
    }
    return report;
}

/// Theta factor list, reconstructed state and diagnostics of a Petz tree
/// factorization.
struct TreeReconstruction {
    std::vector<LabeledOperator> delta_factors;  // Delta_k on (X_k, Y_k), k = 3..n
    LabeledOperator theta;                       // global layout
    DensityOperator rho;
    double closed_form_entropy_bits = 0.0;
    ConstructiveOrder order;
    std::map<std::string, double> residuals;
};

inline double qmt_entropy_closed_form(const MarginalSet& set, const AssociatedGraph& graph) {
    if (!graph.is_tree()) {
        throw HypothesisError("qmt_entropy_closed_form: associated graph is not a tree");
    }
    double s = 0.0;
    for (const auto& [key, op] : set.pairs) s += von_neumann_entropy(op);
    for (const auto& node : graph.nodes) {
        const long deg = graph.degree(node);
        if (deg > 1) s -= (deg - 1) * von_neumann_entropy(set.node_marginal(node));
    }
    return s;
}

/// Square-root factorization Theta = Delta_n ... Delta_3 (rho_{X1X2}^{1/2} (x) I)
/// with Delta_k = rho_{X_k Y_k}^{1/2} rho_{Y_k}^{-1/2}, everything multiplied
/// in the global space; the reconstruction is Theta Theta^dag.
inline TreeReconstruction petz_factorize(const MarginalSet& set, const ConstructiveOrder& order,
                                         double tol = 1e-8,
                                         double cutoff_rel = kDefaultSupportCutoffRel) {
    const AssociatedGraph g = set.graph();
    if (!g.is_tree()) {
        throw HypothesisError("petz_factorize: associated graph is not a tree");
    }
    if (order.order.size() != g.nodes.size() || g.nodes.size() < 2) {
        throw std::invalid_argument("petz_factorize: order must cover all nodes");
    }
    for (size_t k = 1; k < order.order.size(); ++k) {
        const auto it = order.parent.find(order.order[k]);
        if (it == order.parent.end() || !g.has_edge(order.order[k], it->second)) {
            throw std::invalid_argument("petz_factorize: order is not constructive for this tree");
        }
    }

    const LocalConditionsReport conditions = local_qmc_conditions(set, tol);
    if (!conditions.all_pass) {
        throw HypothesisError("petz_factorize: local QMC condition failed on 3-chain " +
                              conditions.first_failure()->to_string());
    }

    TreeReconstruction rec;
    rec.order = order;
    const SystemLayout global = set.layout;

    const DensityOperator& first_pair = set.pair_of(order.order[0], order.order[1]);
    Matrix theta = embed({sqrt_psd(first_pair.matrix, cutoff_rel), first_pair.layout}, global).mat;

    for (size_t k = 2; k < order.order.size(); ++k) {
        const std::string& xk = order.order[k];
        const std::string& yk = order.parent.at(xk);
        const DensityOperator& pair = set.pair_of(xk, yk);
        const DensityOperator rho_yk = set.node_marginal(yk);
        const Matrix inv_y = embed({inv_sqrt_psd(rho_yk.matrix, cutoff_rel), rho_yk.layout},
                                   pair.layout)
                                 .mat;
        LabeledOperator delta{sqrt_psd(pair.matrix, cutoff_rel) * inv_y, pair.layout};
        theta = embed(delta, global).mat * theta;
        rec.delta_factors.push_back(std::move(delta));

        // each partial product is the padded square root of the state on
        // V_k, so it must stay normal; a break identifies the offending node
        const auto nr = is_normal(theta, std::max(tol, 1e-7));
        if (!nr.normal) {
            throw HypothesisError("petz_factorize: Theta lost normality at step " +
                                  std::to_string(k + 1) + " (node " + xk + "), residual " +
                                  std::to_string(nr.residual));
        }
    }

    rec.theta = {theta, global};
    const auto nr = is_normal(theta, tol);
    rec.residuals["theta_normality"] = nr.residual;

    Matrix rho_mat = theta * theta.adjoint();
    rec.residuals["trace"] = std::abs(rho_mat.trace().real() - 1.0);
    rec.rho = make_density(std::move(rho_mat), global, {1e-8, 1e-8, std::max(1e-6, 10 * tol)});

    double worst_marginal = 0.0;
    for (const auto& [key, op] : set.pairs) {
        worst_marginal = std::max(
            worst_marginal,
            marginal_distance(marginal(rec.rho, {key.first, key.second}), op));
    }
    rec.residuals["marginal_max_distance"] = worst_marginal;

    rec.closed_form_entropy_bits = qmt_entropy_closed_form(set, g);
    rec.residuals["closed_vs_direct_entropy"] =
        std::abs(rec.closed_form_entropy_bits - von_neumann_entropy(rec.rho));
    return rec;
}

inline TreeReconstruction petz_factorize(const MarginalSet& set, const std::string& root,
                                         double tol = 1e-8) {
    return petz_factorize(set, constructive_order(set.graph(), root), tol);
}

struct LogConditionReport {
    double residual = 0.0;    // Frobenius, restricted to supp(rho)
    bool support_ok = true;   // supp(rho) inside every padded pair support
    double support_leak = 0.0;
};

/// Residual of log rho = sum_edges log rho_ij - sum_i (deg_i - 1) log rho_i
/// on the support of rho.
inline LogConditionReport verify_log_condition(const DensityOperator& rho, const MarginalSet& set,
                                               double tol = 1e-8,
                                               double cutoff_rel = kDefaultSupportCutoffRel) {
    const AssociatedGraph g = set.graph();
    double incompat = 0.0;
    for (const auto& [key, op] : set.pairs) {
        incompat = std::max(incompat,
                            marginal_distance(marginal(rho, {key.first, key.second}), op));
    }
    if (incompat > std::max(1e-6, 10 * tol)) {
        throw std::invalid_argument("verify_log_condition: rho is not compatible with the set "
                                    "(worst marginal distance " + std::to_string(incompat) + ")");
    }

    const Spectrum s = spectral(rho.matrix, cutoff_rel);
    const Matrix pi = s.support_projector();
    LogConditionReport report;

    Matrix sum = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& [key, op] : set.pairs) {
        const Matrix padded =
            embed({spectral(op.matrix, cutoff_rel).support_projector(), op.layout}, rho.layout)
                .mat;
        report.support_leak =
            std::max(report.support_leak,
                     frobenius((Matrix::Identity(rho.dim(), rho.dim()) - padded) * pi));
        sum += embed({log2_psd(op.matrix, cutoff_rel), op.layout}, rho.layout).mat;
    }
    for (const auto& node : g.nodes) {
        const long deg = g.degree(node);
        if (deg <= 1) continue;
        const DensityOperator nm = set.node_marginal(node);
        sum -= static_cast<double>(deg - 1) *
               embed({log2_psd(nm.matrix, cutoff_rel), nm.layout}, rho.layout).mat;
    }
    report.support_ok = report.support_leak <= std::sqrt(static_cast<double>(rho.dim())) * 1e-7;
    report.residual = frobenius(pi * (log2_psd(rho.matrix, cutoff_rel) - sum) * pi);
    return report;
}

struct LocalCmiReport {
    std::vector<std::pair<ChainTriple, double>> chain_cmi;     // I(X_i : ad X_j | X_j)
    std::vector<std::pair<std::string, double>> order_cmi;     // X_k -> I(X_k : Ybar_k | Y_k)
    ConstructiveOrder order;
    double max_value = 0.0;
};

/// Local Markov conditions of a global state over a tree: every 3-chain CMI
/// from three-body marginals, plus the constructive-order conditions
/// I(X_k : V_{k-1} minus Y_k | Y_k).
inline LocalCmiReport local_markov_cmi(const DensityOperator& rho, const AssociatedGraph& graph,
                                       const std::string& root = "") {
    if (!graph.is_tree()) {
        throw HypothesisError("local_markov_cmi: associated graph is not a tree");
    }
    LocalCmiReport report;
    for (const auto& chain : enumerate_3chains(graph)) {
        const double v = conditional_mutual_information(rho, {chain.left}, {chain.right},
                                                        {chain.center});
        report.max_value = std::max(report.max_value, std::abs(v));
        report.chain_cmi.emplace_back(chain, v);
    }

    const std::string r = root.empty() ? *std::min_element(graph.nodes.begin(), graph.nodes.end())
                                       : root;
    report.order = constructive_order(graph, r);
    for (size_t k = 2; k < report.order.order.size(); ++k) {
        const std::string& xk = report.order.order[k];
        const std::string& yk = report.order.parent.at(xk);
        std::vector<std::string> ybar;  // V_{k-1} minus {Y_k}
        for (size_t j = 0; j < k; ++j) {
            if (report.order.order[j] != yk) ybar.push_back(report.order.order[j]);
        }
        const double v = conditional_mutual_information(rho, {xk}, ybar, {yk});
        report.max_value = std::max(report.max_value, std::abs(v));
        report.order_cmi.emplace_back(xk, v);
    }
    return report;
}

struct MecmpVerdict {
    bool accept = false;
    double entropy_bits = 0.0;
    TreeReconstruction certificate;
};

/// Maximum-entropy compatible marginal decision for tree sets whose
/// 3-chains all pass the local QMC conditions; anything else is refused
/// with a HypothesisError rather than silently answered.
inline MecmpVerdict mecmp_decide(const MarginalSet& set, double k, double tol = 1e-8) {
    const AssociatedGraph g = set.graph();
    if (!g.is_tree()) {
        throw HypothesisError("mecmp_decide: associated graph is not a tree");
    }
    const std::string root = *std::min_element(g.nodes.begin(), g.nodes.end());
    MecmpVerdict verdict;
    verdict.certificate = petz_factorize(set, constructive_order(g, root), tol);
    verdict.entropy_bits = verdict.certificate.closed_form_entropy_bits;
    verdict.accept = verdict.entropy_bits >= k;
    return verdict;
}

struct EdgeDims {
    long left = 2;   // factor dimension at the edge's first (normalized) endpoint
    long right = 2;
};

struct QmtInstance {
    DensityOperator state;
    MarginalSet tree_marginals;
    AssociatedGraph tree;
};

/// Product-edge QMT sampler: every node's space factors across its incident
/// edges and the global state is the tensor product of one random two-body
/// state per edge. All tree 3-chains are QMCs by construction and the
/// returned two-body marginals are exact.
inline QmtInstance random_qmt(const AssociatedGraph& tree,
                              const std::map<Edge, EdgeDims>& edge_dims, std::uint64_t seed,
                              long dim_cap = 4096, long edge_rank = 0) {
    if (!tree.is_tree() || tree.nodes.size() < 2) {
        throw HypothesisError("random_qmt: graph must be a tree on at least two nodes");
    }

    // factor bookkeeping: every edge contributes one factor to each endpoint
    struct Factor {
        std::string label;  // internal fine-grained label
        long dim;
    };
    std::map<std::string, std::vector<Factor>> node_factors;  // in edge enumeration order
    std::vector<std::pair<Factor, Factor>> edge_factors;
    for (size_t t = 0; t < tree.edges.size(); ++t) {
        const Edge& e = tree.edges[t];
        const auto it = edge_dims.find(e);
        if (it == edge_dims.end()) {
            throw std::invalid_argument("random_qmt: missing dims for edge {" + e.first + ", " +
                                        e.second + "}");
        }
        if (it->second.left < 1 || it->second.right < 1) {
            throw std::invalid_argument("random_qmt: factor dims must be positive");
        }
        const Factor fl{e.first + "#" + std::to_string(t), it->second.left};
        const Factor fr{e.second + "#" + std::to_string(t), it->second.right};
        node_factors[e.first].push_back(fl);
        node_factors[e.second].push_back(fr);
        edge_factors.push_back({fl, fr});
    }

    long total = 1;
    std::vector<Subsystem> node_parts;
    for (const auto& node : tree.nodes) {
        long d = 1;
        for (const auto& f : node_factors[node]) d *= f.dim;
        node_parts.push_back({node, d});
        total *= d;
        if (total > dim_cap) {
            throw std::invalid_argument("random_qmt: total dimension exceeds cap of " +
                                        std::to_string(dim_cap));
        }
    }
    const SystemLayout node_layout{node_parts};

    // one random edge state per tree edge, in a deterministic seed schedule;
    // edge_rank = 0 draws full-rank states, 1 draws pure ones
    Rng rng(seed);
    std::map<Edge, DensityOperator> sigma;
    for (size_t t = 0; t < tree.edges.size(); ++t) {
        const auto& [fl, fr] = edge_factors[t];
        const long d = fl.dim * fr.dim;
        const long rank = edge_rank <= 0 ? d : std::min(edge_rank, d);
        Matrix g = ginibre(d, rank, rng);
        Matrix m = g * g.adjoint();
        m /= m.trace().real();
        sigma.emplace(tree.edges[t],
                      make_density(std::move(m), SystemLayout{{fl.label, fl.dim},
                                                              {fr.label, fr.dim}}));
    }

    // global state: edge-major product, permuted to node-major factor order,
    // then factors fused per node
    LabeledOperator global;
    bool first = true;
    for (const auto& e : tree.edges) {
        global = first ? sigma.at(e).labeled() : tensor(global, sigma.at(e).labeled());
        first = false;
    }
    std::vector<std::string> fine_order;
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (const auto& node : tree.nodes) {
        std::vector<std::string> members;
        for (const auto& f : node_factors[node]) {
            fine_order.push_back(f.label);
            members.push_back(f.label);
        }
        groups.push_back({node, members});
    }
    global = merge_consecutive(permute_subsystems(global, fine_order), groups);

    QmtInstance inst;
    inst.tree = tree;
    inst.state = make_density(std::move(global.mat), node_layout);

    // exact pair marginals: the shared edge state times the one-sided
    // marginals of every other incident edge
    std::vector<DensityOperator> pair_ops;
    for (const auto& e : tree.edges) {
        const std::string a = node_layout.index_of(e.first) < node_layout.index_of(e.second)
                                  ? e.first
                                  : e.second;
        const std::string b = a == e.first ? e.second : e.first;
        LabeledOperator acc = sigma.at(e).labeled();
        for (const auto& node : {a, b}) {
            for (size_t t = 0; t < tree.edges.size(); ++t) {
                const Edge& other = tree.edges[t];
                if (other == e) continue;
                if (other.first != node && other.second != node) continue;
                const std::string far = other.first == node ? edge_factors[t].second.label
                                                            : edge_factors[t].first.label;
                acc = tensor(acc, partial_trace(sigma.at(other).labeled(), {far}));
            }
        }
        std::vector<std::string> order_a, order_b;
        for (const auto& f : node_factors[a]) order_a.push_back(f.label);
        for (const auto& f : node_factors[b]) order_b.push_back(f.label);
        std::vector<std::string> fine;
        fine.insert(fine.end(), order_a.begin(), order_a.end());
        fine.insert(fine.end(), order_b.begin(), order_b.end());
        LabeledOperator pair = merge_consecutive(permute_subsystems(acc, fine),
                                                 {{a, order_a}, {b, order_b}});
        pair_ops.push_back(make_density(std::move(pair.mat), std::move(pair.layout)));
    }
    inst.tree_marginals = make_marginal_set(node_layout, std::move(pair_ops), 1e-9);
    return inst;
}

/// Convenience overload: the same factor dims on every edge.
inline QmtInstance random_qmt(const AssociatedGraph& tree, EdgeDims dims, std::uint64_t seed,
                              long dim_cap = 4096, long edge_rank = 0) {
    std::map<Edge, EdgeDims> per_edge;
    for (const auto& e : tree.edges) per_edge[e] = dims;
    return random_qmt(tree, per_edge, seed, dim_cap, edge_rank);
}

}  // namespace qmt
