#pragma once

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "qmt/density.hpp"
#include "qmt/spectral.hpp"

namespace qmt {

/// Entropies are base-2 throughout; fannes_bound is the one nats-valued
/// exception (stated that way in the source inequality). Conversion factor
/// at the comparison site: S_nats = S_bits * ln 2.

inline double entropy_of_probabilities(const RealVector& p, double cutoff = 0.0) {
    double s = 0.0;
    for (long i = 0; i < p.size(); ++i) {
        if (p(i) > cutoff && p(i) > 0.0) s -= p(i) * std::log2(p(i));
    }
    return s;
}

struct EntropyReport {
    double value_bits = 0.0;
    Spectrum spectrum;
    double cutoff = 0.0;
};

inline EntropyReport entropy_report(const DensityOperator& rho,
                                    double cutoff_rel = kDefaultSupportCutoffRel) {
    EntropyReport r;
    r.spectrum = spectral(rho.matrix, cutoff_rel, std::max(rho.herm_tol, kDefaultHermTol));
    r.cutoff = r.spectrum.support_cutoff;
    r.value_bits = entropy_of_probabilities(r.spectrum.eigenvalues, r.spectrum.support_cutoff);
    return r;
}

/// -Tr rho log2 rho over the support; 0 for pure states.
inline double von_neumann_entropy(const DensityOperator& rho,
                                  double cutoff_rel = kDefaultSupportCutoffRel) {
    return entropy_report(rho, cutoff_rel).value_bits;
}

/// Tr rho (log2 rho - log2 sigma) when supp(rho) is contained in
/// supp(sigma); +infinity otherwise. The containment test tolerates
/// `support_leak_tol` of rho's mass outside supp(sigma).
inline double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                               double cutoff_rel = kDefaultSupportCutoffRel,
                               double support_leak_tol = 1e-9) {
    if (rho.layout != sigma.layout) {
        throw std::invalid_argument("relative_entropy: layout mismatch");
    }
    const Spectrum ss = spectral(sigma.matrix, cutoff_rel);
    const Matrix kernel_proj = Matrix::Identity(sigma.dim(), sigma.dim()) - ss.support_projector();
    const double leak = std::abs((rho.matrix * kernel_proj).trace().real());
    if (leak > support_leak_tol) {
        return std::numeric_limits<double>::infinity();
    }
    const Spectrum sr = spectral(rho.matrix, cutoff_rel);
    double s = 0.0;
    for (long i = 0; i < sr.dim(); ++i) {
        const double lam = sr.eigenvalues(i);
        if (lam > sr.support_cutoff) s += lam * std::log2(lam);
    }
    Eigen::VectorXcd log_sigma = Eigen::VectorXcd::Zero(ss.dim());
    for (long i = 0; i < ss.dim(); ++i) {
        if (ss.eigenvalues(i) > ss.support_cutoff) log_sigma(i) = std::log2(ss.eigenvalues(i));
    }
    const Matrix log_sigma_m = ss.eigenvectors * log_sigma.asDiagonal() * ss.eigenvectors.adjoint();
    s -= (rho.matrix * log_sigma_m).trace().real();
    return s;
}

namespace detail {
inline void require_disjoint(const std::vector<std::string>& a,
                             const std::vector<std::string>& b, const char* what) {
    std::set<std::string> sa(a.begin(), a.end());
    for (const auto& l : b) {
        if (sa.count(l)) {
            throw std::invalid_argument(std::string(what) + ": label sets overlap at '" + l + "'");
        }
    }
}
}  // namespace detail

/// I(A:B) = S(A) + S(B) - S(AB); `part_a` and `part_b` must partition the
/// layout.
inline double mutual_information(const DensityOperator& rho,
                                 const std::vector<std::string>& part_a,
                                 const std::vector<std::string>& part_b) {
    detail::require_disjoint(part_a, part_b, "mutual_information");
    if (static_cast<long>(part_a.size() + part_b.size()) != rho.layout.size()) {
        throw std::invalid_argument("mutual_information: parts must partition the layout");
    }
    const double s_a = von_neumann_entropy(marginal(rho, part_a));
    const double s_b = von_neumann_entropy(marginal(rho, part_b));
    const double s_ab = von_neumann_entropy(rho);
    return s_a + s_b - s_ab;
}

/// I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC), computed from the four
/// entropies. Labels outside A+B+C are traced out first.
inline double conditional_mutual_information(const DensityOperator& rho,
                                             const std::vector<std::string>& a,
                                             const std::vector<std::string>& c,
                                             const std::vector<std::string>& b) {
    detail::require_disjoint(a, c, "conditional_mutual_information");
    detail::require_disjoint(a, b, "conditional_mutual_information");
    detail::require_disjoint(c, b, "conditional_mutual_information");
    std::vector<std::string> abc;
    abc.insert(abc.end(), a.begin(), a.end());
    abc.insert(abc.end(), b.begin(), b.end());
    abc.insert(abc.end(), c.begin(), c.end());
    const DensityOperator rho_abc = marginal(rho, abc);

    std::vector<std::string> ab(a.begin(), a.end());
    ab.insert(ab.end(), b.begin(), b.end());
    std::vector<std::string> bc(b.begin(), b.end());
    bc.insert(bc.end(), c.begin(), c.end());

    const double s_ab = von_neumann_entropy(marginal(rho_abc, ab));
    const double s_bc = von_neumann_entropy(marginal(rho_abc, bc));
    const double s_b = b.empty() ? 0.0 : von_neumann_entropy(marginal(rho_abc, b));
    const double s_abc = von_neumann_entropy(rho_abc);
    return s_ab + s_bc - s_b - s_abc;
}

/// Raw CMI values in (-tol, 0) are numerical noise; reports clamp them.
inline double clamp_cmi(double value, double tol = 1e-9) {
    return (value < 0.0 && value > -tol) ? 0.0 : value;
}

inline double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("binary_entropy: p must be in [0, 1]");
    }
    double s = 0.0;
    if (p > 0.0) s -= p * std::log2(p);
    if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
    return s;
}

/// t (ln d - ln t), valid for 0 < t <= 1/e; bounds |S(rho) - S(sigma)| in
/// nats when t is the trace distance.
inline double fannes_bound(double t, long dim) {
    if (!(t > 0.0) || t > 1.0 / M_E) {
        throw std::invalid_argument("fannes_bound: t must lie in (0, 1/e]");
    }
    return t * (std::log(static_cast<double>(dim)) - std::log(t));
}

/// H(p) + sum_i p_i S(rho_i): the entropy of sum_i p_i |i><i| (x) rho_i.
inline double cq_mixture_entropy(const std::vector<double>& p,
                                 const std::vector<DensityOperator>& rhos) {
    if (p.size() != rhos.size() || p.empty()) {
        throw std::invalid_argument("cq_mixture_entropy: probability/state count mismatch");
    }
    double total = 0.0;
    for (double q : p) {
        if (q < -1e-12) throw std::invalid_argument("cq_mixture_entropy: negative probability");
        total += q;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("cq_mixture_entropy: probabilities must sum to 1");
    }
    for (const auto& r : rhos) {
        if (r.layout != rhos[0].layout) {
            throw std::invalid_argument("cq_mixture_entropy: mixed layouts");
        }
    }
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) s += -p[i] * std::log2(p[i]) + p[i] * von_neumann_entropy(rhos[i]);
    }
    return s;
}

/// Lower bound on S(rho0/2 + rho1/2):
///   1/2 [S(rho0) + S(rho1)] + 1 - H(1/2 + d/2), d the trace distance.
inline double mixture_entropy_lower_bound(const DensityOperator& rho0,
                                          const DensityOperator& rho1) {
    const double d = trace_distance(rho0, rho1);
    return 0.5 * (von_neumann_entropy(rho0) + von_neumann_entropy(rho1)) + 1.0 -
           binary_entropy(std::min(0.5 + d / 2.0, 1.0));
}

}  // namespace qmt
