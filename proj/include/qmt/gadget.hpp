#pragma once

#include <string>
#include <utility>

#include "qmt/density.hpp"
#include "qmt/entropy.hpp"
#include "qmt/tensor.hpp"

namespace qmt {

/// zeta = 1/2 |phi+><phi+| + 1/2 |phi-><phi-| on two qubits; S(zeta) = 1.
inline DensityOperator build_zeta(const std::string& label_a = "A",
                                  const std::string& label_c = "C") {
    const SystemLayout layout{{label_a, 2}, {label_c, 2}};
    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(4), minus = Eigen::VectorXcd::Zero(4);
    plus(0) = plus(3) = 1.0 / std::sqrt(2.0);
    minus(0) = 1.0 / std::sqrt(2.0);
    minus(3) = -1.0 / std::sqrt(2.0);
    const Matrix m = 0.5 * (plus * plus.adjoint()) + 0.5 * (minus * minus.adjoint());
    return make_density(m, layout);
}

/// xi0 = mu0/2 + mu1/2 on the mu layout; xi1 adds a fresh flag qubit:
/// 1/2 |0><0| (x) mu0 + 1/2 |1><1| (x) mu1.
inline std::pair<DensityOperator, DensityOperator> build_xi(const DensityOperator& mu0,
                                                            const DensityOperator& mu1,
                                                            const std::string& flag_label = "b") {
    if (mu0.layout != mu1.layout) {
        throw std::invalid_argument("build_xi: mu0 and mu1 must share a layout");
    }
    DensityOperator xi0 = make_density(0.5 * mu0.matrix + 0.5 * mu1.matrix, mu0.layout);
    const DensityOperator f0 = basis_state(0, {{flag_label, 2}});
    const DensityOperator f1 = basis_state(1, {{flag_label, 2}});
    DensityOperator xi1 = make_density(
        0.5 * tensor(f0, mu0).matrix + 0.5 * tensor(f1, mu1).matrix,
        SystemLayout{{flag_label, 2}}.concat(mu0.layout));
    return {std::move(xi0), std::move(xi1)};
}

/// The reduction pair
///   rho'  = xi0^A (x) zeta^{AC} (x) xi0^C (x) |0><0|_B,
///   rho'' = xi1^{AC} (x) xi1^{CA} (x) |0><0|_B,
/// assembled on A = (flag-or-zeta qubit, mu system), B a qubit, and
/// C likewise, then fused to a tripartite A (x) B (x) C layout. The two
/// states share their A and C marginals by construction.
struct GadgetPair {
    DensityOperator rho_prime;
    DensityOperator rho_doubleprime;
    DensityOperator mu0, mu1;
    long m0 = 0;  // polarization parameter placeholder; recorded, unused
    double a_marginal_distance = 0.0;
    double c_marginal_distance = 0.0;
};

inline GadgetPair build_gadget_pair(const DensityOperator& mu0, const DensityOperator& mu1) {
    if (mu0.layout != mu1.layout) {
        throw std::invalid_argument("build_gadget_pair: mu0 and mu1 must share a layout");
    }
    if (mu0.layout.size() != 1) {
        throw std::invalid_argument("build_gadget_pair: mu states must be single-subsystem");
    }
    const long m = mu0.layout.total_dim();

    const auto mu_on = [&](const std::string& label) {
        return SystemLayout{{label, m}};
    };
    const auto relabeled = [&](const DensityOperator& rho, SystemLayout layout) {
        return make_density(rho.matrix, std::move(layout));
    };

    const std::vector<std::string> fine_order{"Aq", "Am", "B", "Cq", "Cm"};
    const DensityOperator b0 = basis_state(0, {{"B", 2}});

    // rho': zeta across the (Aq, Cq) qubits, one xi0 on each mu slot
    const DensityOperator zeta = build_zeta("Aq", "Cq");
    const auto [xi0, xi1] = build_xi(mu0, mu1, "q");
    LabeledOperator prime = tensor(zeta.labeled(), relabeled(xi0, mu_on("Am")).labeled());
    prime = tensor(prime, relabeled(xi0, mu_on("Cm")).labeled());
    prime = tensor(prime, b0.labeled());
    prime = permute_subsystems(prime, fine_order);

    // rho'': xi1^{AC} puts its flag qubit in A and its mu part in C,
    // xi1^{CA} the other way around
    const DensityOperator xi1_ac =
        make_density(xi1.matrix, SystemLayout{{"Aq", 2}, {"Cm", m}});
    const DensityOperator xi1_ca =
        make_density(xi1.matrix, SystemLayout{{"Cq", 2}, {"Am", m}});
    LabeledOperator doubleprime = tensor(xi1_ac.labeled(), xi1_ca.labeled());
    doubleprime = tensor(doubleprime, b0.labeled());
    doubleprime = permute_subsystems(doubleprime, fine_order);

    const std::vector<std::pair<std::string, std::vector<std::string>>> merge_groups{
        {"A", {"Aq", "Am"}}, {"B", {"B"}}, {"C", {"Cq", "Cm"}}};
    LabeledOperator prime_merged = merge_consecutive(prime, merge_groups);
    LabeledOperator doubleprime_merged = merge_consecutive(doubleprime, merge_groups);

    GadgetPair pair;
    pair.mu0 = mu0;
    pair.mu1 = mu1;
    pair.rho_prime = make_density(std::move(prime_merged.mat), prime_merged.layout);
    pair.rho_doubleprime =
        make_density(std::move(doubleprime_merged.mat), doubleprime_merged.layout);
    pair.a_marginal_distance = trace_distance(partial_trace(pair.rho_prime, {"A"}),
                                              partial_trace(pair.rho_doubleprime, {"A"}));
    pair.c_marginal_distance = trace_distance(partial_trace(pair.rho_prime, {"C"}),
                                              partial_trace(pair.rho_doubleprime, {"C"}));
    return pair;
}

struct EntropyGapReport {
    double gap_bits = 0.0;           // S(rho'') - S(rho'), computed directly
    double identity_value = 0.0;     // 2 (S(xi1) - S(xi0)) - 1
    double identity_residual = 0.0;
};

inline EntropyGapReport entropy_gap(const GadgetPair& pair) {
    EntropyGapReport r;
    r.gap_bits =
        von_neumann_entropy(pair.rho_doubleprime) - von_neumann_entropy(pair.rho_prime);
    const auto [xi0, xi1] = build_xi(pair.mu0, pair.mu1);
    r.identity_value = 2.0 * (von_neumann_entropy(xi1) - von_neumann_entropy(xi0)) - 1.0;
    r.identity_residual = std::abs(r.gap_bits - r.identity_value);
    return r;
}

enum class ThreeCqedVerdict { Accept, Reject, ViolatedPromise };

struct ThreeCqedDecision {
    ThreeCqedVerdict verdict = ThreeCqedVerdict::ViolatedPromise;
    double s0 = 0.0, s1 = 0.0;
    double a_marginal_distance = 0.0;
    double c_marginal_distance = 0.0;
    std::string note;
};

/// Promise decision: the inputs must share A and C marginals and differ in
/// entropy by at least 1/2; accept when S(rho0) - S(rho1) >= 1/2.
inline ThreeCqedDecision decide_3cqed(const DensityOperator& rho0, const DensityOperator& rho1,
                                      double tol = 1e-8) {
    if (rho0.layout != rho1.layout) {
        throw std::invalid_argument("decide_3cqed: layout mismatch");
    }
    if (rho0.layout.size() != 3) {
        throw std::invalid_argument("decide_3cqed: expected a tripartite layout");
    }
    const std::string a = rho0.layout.part(0).label;
    const std::string c = rho0.layout.part(2).label;

    ThreeCqedDecision d;
    d.a_marginal_distance =
        trace_distance(partial_trace(rho0, {a}), partial_trace(rho1, {a}));
    d.c_marginal_distance =
        trace_distance(partial_trace(rho0, {c}), partial_trace(rho1, {c}));
    d.s0 = von_neumann_entropy(rho0);
    d.s1 = von_neumann_entropy(rho1);

    if (d.a_marginal_distance > tol || d.c_marginal_distance > tol) {
        d.note = "marginal compatibility promise violated";
        return d;
    }
    const double gap = d.s0 - d.s1;
    if (std::abs(gap) < 0.5 - tol) {
        d.note = "entropy gap promise violated (|gap| = " + std::to_string(std::abs(gap)) + ")";
        return d;
    }
    d.verdict = gap > 0 ? ThreeCqedVerdict::Accept : ThreeCqedVerdict::Reject;
    return d;
}

}  // namespace qmt
