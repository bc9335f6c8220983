#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qmt/density.hpp"
#include "qmt/entropy.hpp"
#include "qmt/spectral.hpp"
#include "qmt/tensor.hpp"

namespace qmt {

namespace detail {

inline std::vector<std::string> label_intersection(const SystemLayout& a, const SystemLayout& b) {
    std::vector<std::string> out;
    for (const auto& p : a.parts()) {
        if (b.contains(p.label)) out.push_back(p.label);
    }
    return out;
}

/// Relative Frobenius mass of `x` outside supp(pi) (x K or K x, K = I - pi
/// padded into x's layout).
inline double support_leak(const LabeledOperator& x, const Matrix& supp_proj,
                           const SystemLayout& proj_layout) {
    const Matrix k = embed({Matrix::Identity(supp_proj.rows(), supp_proj.cols()) - supp_proj,
                            proj_layout},
                           x.layout)
                         .mat;
    const double scale = std::max(frobenius(x.mat), 1e-300);
    return std::max(frobenius(k * x.mat), frobenius(x.mat * k)) / scale;
}

}  // namespace detail

/// Petz recovery map X -> rho_BC^{1/2} (rho_B^{-1/2} X rho_B^{-1/2} (x) I_C) rho_BC^{1/2}.
/// `x` may carry extra "A" subsystems untouched by the map; the result lives
/// on x's labels followed by rho_bc's C labels. Throws if x is not supported
/// within supp(rho_B) (x) H_A.
inline LabeledOperator petz_map_apply(const DensityOperator& rho_bc,
                                      const DensityOperator& rho_b, const LabeledOperator& x,
                                      double support_leak_tol = 1e-6,
                                      double cutoff_rel = kDefaultSupportCutoffRel) {
    for (const auto& p : rho_b.layout.parts()) {
        if (!rho_bc.layout.contains(p.label) || !x.layout.contains(p.label)) {
            throw std::invalid_argument("petz_map_apply: B label '" + p.label +
                                        "' must appear in both rho_BC and x");
        }
    }
    const auto overlap = detail::label_intersection(x.layout, rho_bc.layout);
    if (overlap.size() != static_cast<size_t>(rho_b.layout.size())) {
        throw std::invalid_argument("petz_map_apply: x and rho_BC must overlap exactly on B");
    }

    const Spectrum sb = spectral(rho_b.matrix, cutoff_rel);
    if (sb.rank_deficient()) {
        const double leak = detail::support_leak(x, sb.support_projector(), rho_b.layout);
        if (leak > support_leak_tol) {
            throw std::domain_error("petz_map_apply: x is not supported within supp(rho_B) "
                                    "(leak " + std::to_string(leak) + ")");
        }
    }

    const Matrix inv_sqrt_b = embed({inv_sqrt_psd(rho_b.matrix, cutoff_rel), rho_b.layout},
                                    x.layout)
                                  .mat;
    const LabeledOperator y{inv_sqrt_b * x.mat * inv_sqrt_b, x.layout};

    const SystemLayout global = x.layout.concat(rho_bc.layout.complement(rho_b.layout.labels()));
    const Matrix sqrt_bc = embed({sqrt_psd(rho_bc.matrix, cutoff_rel), rho_bc.layout}, global).mat;
    const Matrix y_g = embed(y, global).mat;
    return {sqrt_bc * y_g * sqrt_bc, global};
}

/// Rotated Petz map
///   X -> rho_BC^{(1+it)/2} (rho_B^{-(1+it)/2} X rho_B^{-(1-it)/2} (x) I_C) rho_BC^{(1-it)/2};
/// t = 0 reduces to petz_map_apply.
inline LabeledOperator rotated_petz_apply(const DensityOperator& rho_bc,
                                          const DensityOperator& rho_b,
                                          const LabeledOperator& x, double t,
                                          double support_leak_tol = 1e-6,
                                          double cutoff_rel = kDefaultSupportCutoffRel) {
    for (const auto& p : rho_b.layout.parts()) {
        if (!rho_bc.layout.contains(p.label) || !x.layout.contains(p.label)) {
            throw std::invalid_argument("rotated_petz_apply: B label '" + p.label +
                                        "' must appear in both rho_BC and x");
        }
    }
    const Spectrum sb = spectral(rho_b.matrix, cutoff_rel);
    if (sb.rank_deficient()) {
        const double leak = detail::support_leak(x, sb.support_projector(), rho_b.layout);
        if (leak > support_leak_tol) {
            throw std::domain_error("rotated_petz_apply: x is not supported within supp(rho_B)");
        }
    }

    const Complex i(0.0, 1.0);
    const Complex plus = (1.0 + i * t) / 2.0;
    const Complex minus = (1.0 - i * t) / 2.0;

    const Matrix bl = embed({cpow_psd(rho_b.matrix, -plus, cutoff_rel), rho_b.layout}, x.layout).mat;
    const Matrix br = embed({cpow_psd(rho_b.matrix, -minus, cutoff_rel), rho_b.layout}, x.layout).mat;
    const LabeledOperator y{bl * x.mat * br, x.layout};

    const SystemLayout global = x.layout.concat(rho_bc.layout.complement(rho_b.layout.labels()));
    const Matrix bcl = embed({cpow_psd(rho_bc.matrix, plus, cutoff_rel), rho_bc.layout}, global).mat;
    const Matrix bcr = embed({cpow_psd(rho_bc.matrix, minus, cutoff_rel), rho_bc.layout}, global).mat;
    const Matrix y_g = embed(y, global).mat;
    return {bcl * y_g * bcr, global};
}

/// Two-body marginals over a shared middle system: rho_AB on A..B and
/// rho_BC on B..C. Construction enforces the Eq.-(1) overlap consistency
/// within `tolerance`.
struct ThreeChainMarginals {
    DensityOperator rho_ab;
    DensityOperator rho_bc;
    std::vector<std::string> a_labels;
    std::vector<std::string> b_labels;
    std::vector<std::string> c_labels;
    double tolerance = 1e-8;
    double b_marginal_distance = 0.0;

    DensityOperator rho_b() const { return marginal(rho_bc, b_labels); }

    SystemLayout chain_layout() const {
        return rho_ab.layout.sublayout(a_labels)
            .concat(rho_ab.layout.sublayout(b_labels))
            .concat(rho_bc.layout.sublayout(c_labels));
    }
};

inline ThreeChainMarginals make_three_chain(DensityOperator rho_ab, DensityOperator rho_bc,
                                            double tolerance = 1e-8) {
    ThreeChainMarginals chain;
    chain.b_labels = detail::label_intersection(rho_ab.layout, rho_bc.layout);
    if (chain.b_labels.empty()) {
        throw std::invalid_argument("make_three_chain: marginals share no subsystem");
    }
    for (const auto& p : rho_ab.layout.parts()) {
        if (!rho_bc.layout.contains(p.label)) {
            chain.a_labels.push_back(p.label);
        } else if (rho_bc.layout.dim_of(p.label) != p.dim) {
            throw std::invalid_argument("make_three_chain: dimension mismatch on '" + p.label + "'");
        }
    }
    for (const auto& p : rho_bc.layout.parts()) {
        if (!rho_ab.layout.contains(p.label)) chain.c_labels.push_back(p.label);
    }
    if (chain.a_labels.empty() || chain.c_labels.empty()) {
        throw std::invalid_argument("make_three_chain: one marginal is contained in the other");
    }

    DensityOperator b_from_ab = marginal(rho_ab, chain.b_labels);
    DensityOperator b_from_bc = marginal(rho_bc, chain.b_labels);
    if (b_from_bc.layout != b_from_ab.layout) {
        LabeledOperator perm = permute_subsystems(b_from_bc.labeled(), b_from_ab.layout.labels());
        b_from_bc = make_density(std::move(perm.mat), std::move(perm.layout));
    }
    chain.b_marginal_distance = trace_distance(b_from_ab, b_from_bc);
    chain.tolerance = tolerance;
    if (chain.b_marginal_distance > tolerance) {
        throw std::invalid_argument("make_three_chain: inconsistent B marginals (distance " +
                                    std::to_string(chain.b_marginal_distance) + " > tolerance)");
    }
    chain.rho_ab = std::move(rho_ab);
    chain.rho_bc = std::move(rho_bc);
    return chain;
}

/// Theta = rho_BC^{1/2} rho_B^{-1/2} rho_AB^{1/2}, identity-padded on the
/// chain layout A..B..C. Its normality certifies QMC existence and
/// Theta Theta^dag is the maximum-entropy compatible state.
inline LabeledOperator theta(const ThreeChainMarginals& chain,
                             double cutoff_rel = kDefaultSupportCutoffRel) {
    const SystemLayout global = chain.chain_layout();
    const DensityOperator rho_b = chain.rho_b();
    const Matrix sq_bc = embed({sqrt_psd(chain.rho_bc.matrix, cutoff_rel), chain.rho_bc.layout},
                               global)
                             .mat;
    const Matrix isq_b = embed({inv_sqrt_psd(rho_b.matrix, cutoff_rel), rho_b.layout}, global).mat;
    const Matrix sq_ab = embed({sqrt_psd(chain.rho_ab.matrix, cutoff_rel), chain.rho_ab.layout},
                               global)
                             .mat;
    return {sq_bc * isq_b * sq_ab, global};
}

struct QmcVerdict {
    bool exists = false;
    LabeledOperator theta_op;
    double normality_residual = 0.0;
    double b_marginal_distance = 0.0;
    double trace_residual = 0.0;
    std::optional<DensityOperator> reconstruction;
    double cmi_of_reconstruction = std::numeric_limits<double>::quiet_NaN();
    double marginal_ab_distance = std::numeric_limits<double>::quiet_NaN();
    double marginal_bc_distance = std::numeric_limits<double>::quiet_NaN();
    /// Set when a support pseudo-inverse was taken on a rank-deficient
    /// marginal; the verdict is then only as solid as the cutoff decision.
    bool rank_deficient = false;
};

/// Lemma-style existence test: the chain is compatible with a QMC iff the
/// B marginals agree and Theta is normal; the reconstruction is
/// Theta Theta^dag.
inline QmcVerdict qmc_exists(const ThreeChainMarginals& chain, double tol = 1e-8,
                             double cutoff_rel = kDefaultSupportCutoffRel) {
    QmcVerdict v;
    v.b_marginal_distance = chain.b_marginal_distance;
    v.theta_op = theta(chain, cutoff_rel);
    const auto nr = is_normal(v.theta_op.mat, tol);
    v.normality_residual = nr.residual;

    const DensityOperator rho_b = chain.rho_b();
    v.rank_deficient = spectral(chain.rho_ab.matrix, cutoff_rel).rank_deficient() ||
                       spectral(chain.rho_bc.matrix, cutoff_rel).rank_deficient() ||
                       spectral(rho_b.matrix, cutoff_rel).rank_deficient();

    Matrix rec = v.theta_op.mat * v.theta_op.mat.adjoint();
    v.trace_residual = std::abs(rec.trace().real() - 1.0);
    v.exists = nr.normal && v.b_marginal_distance <= tol;
    if (!v.exists) return v;

    DensityOperator rho = make_density(std::move(rec), v.theta_op.layout,
                                       {1e-8, 1e-8, std::max(1e-6, 10 * tol)});
    v.marginal_ab_distance =
        marginal_distance(marginal(rho, chain.rho_ab.layout.labels()), chain.rho_ab);
    v.marginal_bc_distance =
        marginal_distance(marginal(rho, chain.rho_bc.layout.labels()), chain.rho_bc);
    v.cmi_of_reconstruction =
        conditional_mutual_information(rho, chain.a_labels, chain.c_labels, chain.b_labels);
    v.reconstruction = std::move(rho);
    return v;
}

struct QmcConditionResiduals {
    double recovery_error = 0.0;          // ||P_{B->BC}(rho_AB) - rho||_1
    double cmi = 0.0;                     // |I(A:C|B)|
    double marginal_preservation = 0.0;   // ||Tr_C P(rho_AB) - rho_AB||_1
    double log_condition = 0.0;           // Frobenius, on supp(rho)
};

/// Residuals of the four equivalent QMC characterizations for a tripartite
/// state whose layout order is read as the chain A - B - C.
inline QmcConditionResiduals qmc_conditions(const DensityOperator& rho,
                                            double cutoff_rel = kDefaultSupportCutoffRel) {
    if (rho.layout.size() != 3) {
        throw std::invalid_argument("qmc_conditions: expected a tripartite layout");
    }
    const std::string a = rho.layout.part(0).label;
    const std::string b = rho.layout.part(1).label;
    const std::string c = rho.layout.part(2).label;

    const DensityOperator rho_ab = partial_trace(rho, {c});
    const DensityOperator rho_bc = partial_trace(rho, {a});
    const DensityOperator rho_b = partial_trace(rho, {a, c});

    QmcConditionResiduals r;

    LabeledOperator recovered = petz_map_apply(rho_bc, rho_b, rho_ab.labeled(), 1e-4, cutoff_rel);
    r.recovery_error = trace_norm(recovered.mat - rho.matrix);
    r.marginal_preservation =
        trace_norm(partial_trace(recovered, {c}).mat - rho_ab.matrix);

    r.cmi = std::abs(conditional_mutual_information(rho, {a}, {c}, {b}));

    const Spectrum s = spectral(rho.matrix, cutoff_rel);
    const Matrix pi = s.support_projector();
    const Matrix lhs = log2_psd(rho.matrix, cutoff_rel);
    const Matrix l_ab = embed({log2_psd(rho_ab.matrix, cutoff_rel), rho_ab.layout}, rho.layout).mat;
    const Matrix l_bc = embed({log2_psd(rho_bc.matrix, cutoff_rel), rho_bc.layout}, rho.layout).mat;
    const Matrix l_b = embed({log2_psd(rho_b.matrix, cutoff_rel), rho_b.layout}, rho.layout).mat;
    r.log_condition = frobenius(pi * (lhs - l_ab - l_bc + l_b) * pi);
    return r;
}

struct QmcBlock {
    long left_dim = 1;   // pairs with A
    long right_dim = 1;  // pairs with C
};

/// Structured QMC sampler: rho = (+)_j q_j sigma_j^{A,bL} (x) tau_j^{bR,C}
/// over a direct-sum factorization of B, so I(A:C|B) = 0 holds exactly by
/// construction.
inline DensityOperator random_qmc(long dim_a, const std::vector<QmcBlock>& blocks, long dim_c,
                                  std::uint64_t seed,
                                  const std::vector<std::string>& labels = {"A", "B", "C"}) {
    if (blocks.empty()) throw std::invalid_argument("random_qmc: no blocks");
    if (labels.size() != 3) throw std::invalid_argument("random_qmc: need three labels");
    long dim_b = 0;
    for (const auto& bl : blocks) {
        if (bl.left_dim < 1 || bl.right_dim < 1) {
            throw std::invalid_argument("random_qmc: block dims must be positive");
        }
        dim_b += bl.left_dim * bl.right_dim;
    }

    Rng rng(seed);
    std::vector<double> q(blocks.size());
    double qsum = 0.0;
    for (auto& w : q) {
        w = rng.uniform(0.2, 1.0);
        qsum += w;
    }
    for (auto& w : q) w /= qsum;

    std::vector<Matrix> sigma, tau;
    for (const auto& bl : blocks) {
        const long ds = dim_a * bl.left_dim;
        Matrix g = ginibre(ds, ds, rng);
        Matrix s = g * g.adjoint();
        sigma.push_back(s / s.trace().real());
        const long dt = bl.right_dim * dim_c;
        g = ginibre(dt, dt, rng);
        Matrix t = g * g.adjoint();
        tau.push_back(t / t.trace().real());
    }

    const long total = dim_a * dim_b * dim_c;
    Matrix out = Matrix::Zero(total, total);
    long offset = 0;
    for (size_t j = 0; j < blocks.size(); ++j) {
        const long dl = blocks[j].left_dim, dr = blocks[j].right_dim;
        for (long a1 = 0; a1 < dim_a; ++a1)
        for (long l1 = 0; l1 < dl; ++l1)
        for (long r1 = 0; r1 < dr; ++r1)
        for (long c1 = 0; c1 < dim_c; ++c1)
        for (long a2 = 0; a2 < dim_a; ++a2)
        for (long l2 = 0; l2 < dl; ++l2)
        for (long r2 = 0; r2 < dr; ++r2)
        for (long c2 = 0; c2 < dim_c; ++c2) {
            const long b1 = offset + l1 * dr + r1;
            const long b2 = offset + l2 * dr + r2;
            const long row = (a1 * dim_b + b1) * dim_c + c1;
            const long col = (a2 * dim_b + b2) * dim_c + c2;
            out(row, col) = q[j] * sigma[j](a1 * dl + l1, a2 * dl + l2) *
                            tau[j](r1 * dim_c + c1, r2 * dim_c + c2);
        }
        offset += dl * dr;
    }
    return make_density(std::move(out),
                        SystemLayout{{labels[0], dim_a}, {labels[1], dim_b}, {labels[2], dim_c}});
}

}  // namespace qmt
