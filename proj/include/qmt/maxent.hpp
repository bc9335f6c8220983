#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qmt/marginal_set.hpp"

namespace qmt {

struct MaxentOptions {
    long max_iter = 20000;
    double violation_tol = 1e-6;  // stop when max |moment gap| drops below
    double grad_tol = 1e-8;       // or when the gradient 2-norm does
    bool throw_on_failure = true;
};

struct MaxentResult {
    DensityOperator state;
    long iterations = 0;
    double max_violation = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
};

namespace detail {

/// Orthonormal Hermitian basis of B(C^d) under the Hilbert-Schmidt inner
/// product: diagonal projectors, symmetric and antisymmetric pair elements.
inline std::vector<Matrix> hermitian_basis(long d) {
    std::vector<Matrix> out;
    out.reserve(static_cast<size_t>(d * d));
    for (long k = 0; k < d; ++k) {
        Matrix e = Matrix::Zero(d, d);
        e(k, k) = 1.0;
        out.push_back(std::move(e));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (long p = 0; p < d; ++p) {
        for (long q = p + 1; q < d; ++q) {
            Matrix s = Matrix::Zero(d, d);
            s(p, q) = s(q, p) = inv_sqrt2;
            out.push_back(std::move(s));
            Matrix a = Matrix::Zero(d, d);
            a(p, q) = Complex(0.0, -inv_sqrt2);
            a(q, p) = Complex(0.0, inv_sqrt2);
            out.push_back(std::move(a));
        }
    }
    return out;
}

struct ExpFamily {
    Matrix state;     // exp(A)/Z
    double log_z = 0.0;
};

inline ExpFamily gibbs_of(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
    const RealVector& d = es.eigenvalues();
    const double shift = d.maxCoeff();
    RealVector w = (d.array() - shift).exp();
    const double z = w.sum();
    ExpFamily out;
    out.state = es.eigenvectors() * (w / z).asDiagonal() * es.eigenvectors().adjoint();
    out.log_z = shift + std::log(z);
    return out;
}

}  // namespace detail

/// Independent maximum-entropy solver: dual descent on
///   g(lambda) = ln Tr exp(sum_a lambda_a E_a) - lambda . c
/// over a Hermitian basis of every constrained pair's operator space, with
/// backtracking line search. Deliberately ignorant of Petz machinery so it
/// can serve as the oracle for the factorization path.
inline MaxentResult maxent_bruteforce(const MarginalSet& set, MaxentOptions options = {}) {
    const SystemLayout& layout = set.layout;
    const long dim = layout.total_dim();
    if (dim > 64) {
        throw std::invalid_argument("maxent_bruteforce: total dimension " + std::to_string(dim) +
                                    " beyond the desk-scale cap of 64");
    }
    if (set.pairs.empty()) throw std::invalid_argument("maxent_bruteforce: empty marginal set");

    std::vector<Matrix> constraints;  // embedded in the global space
    std::vector<double> targets;
    for (const auto& [key, op] : set.pairs) {
        const long d = op.dim();
        for (const auto& e : detail::hermitian_basis(d)) {
            constraints.push_back(embed({e, op.layout}, layout).mat);
            targets.push_back((op.matrix * e).trace().real());
        }
    }
    const size_t m = constraints.size();

    const auto assemble = [&](const std::vector<double>& lambda) {
        Matrix a = Matrix::Zero(dim, dim);
        for (size_t i = 0; i < m; ++i) a += lambda[i] * constraints[i];
        return a;
    };
    const auto dual_value = [&](const std::vector<double>& lambda) {
        double dot = 0.0;
        for (size_t i = 0; i < m; ++i) dot += lambda[i] * targets[i];
        return detail::gibbs_of(assemble(lambda)).log_z - dot;
    };

    std::vector<double> lambda(m, 0.0), grad(m, 0.0), trial(m, 0.0);
    double step = 1.0;
    MaxentResult result;

    double g_now = dual_value(lambda);
    for (long iter = 0; iter < options.max_iter; ++iter) {
        const detail::ExpFamily fam = detail::gibbs_of(assemble(lambda));
        double grad_sq = 0.0, max_violation = 0.0;
        for (size_t i = 0; i < m; ++i) {
            grad[i] = (fam.state * constraints[i]).trace().real() - targets[i];
            grad_sq += grad[i] * grad[i];
            max_violation = std::max(max_violation, std::abs(grad[i]));
        }
        result.iterations = iter;
        result.max_violation = max_violation;
        result.grad_norm = std::sqrt(grad_sq);
        if (max_violation <= options.violation_tol || result.grad_norm <= options.grad_tol) {
            result.converged = true;
            result.state = make_density(fam.state, layout, {1e-9, 1e-9, 1e-9});
            return result;
        }

        // Armijo backtracking, with the step allowed to grow again after
        // successful iterations
        step = std::min(step * 2.0, 1e6);
        bool moved = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            for (size_t i = 0; i < m; ++i) trial[i] = lambda[i] - step * grad[i];
            const double g_trial = dual_value(trial);
            if (g_trial <= g_now - 1e-4 * step * grad_sq) {
                lambda.swap(trial);
                g_now = g_trial;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;  // line search stalled at machine precision
    }

    const detail::ExpFamily fam = detail::gibbs_of(assemble(lambda));
    result.state = make_density(fam.state, layout, {1e-9, 1e-9, 1e-9});
    result.converged = false;
    if (options.throw_on_failure) {
        throw std::runtime_error("maxent_bruteforce: no convergence within " +
                                 std::to_string(options.max_iter) + " iterations; final max "
                                 "constraint violation " + std::to_string(result.max_violation));
    }
    return result;
}

}  // namespace qmt
