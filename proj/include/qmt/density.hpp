#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmt/layout.hpp"
#include "qmt/matrix.hpp"
#include "qmt/rng.hpp"
#include "qmt/spectral.hpp"
#include "qmt/tensor.hpp"

namespace qmt {

inline constexpr double kDefaultTraceTol = 1e-9;

struct ValidationTols {
    double herm = kDefaultHermTol;
    double psd = kDefaultPsdTol;
    double trace = kDefaultTraceTol;
};

/// Validated state: Hermitian within herm_tol, min eigenvalue >= -psd_tol,
/// |Tr - 1| <= trace_tol. The tolerances used at validation travel with the
/// object.
struct DensityOperator {
    Matrix matrix;
    SystemLayout layout;
    double herm_tol = kDefaultHermTol;
    double psd_tol = kDefaultPsdTol;
    double trace_tol = kDefaultTraceTol;

    long dim() const { return matrix.rows(); }

    LabeledOperator labeled() const { return {matrix, layout}; }
};

inline DensityOperator make_density(Matrix m, SystemLayout layout,
                                    ValidationTols tols = {}) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("make_density: matrix is not square");
    }
    if (m.rows() != layout.total_dim()) {
        throw std::invalid_argument("make_density: matrix dimension " +
                                    std::to_string(m.rows()) + " does not match layout " +
                                    layout.to_string());
    }
    if (!all_finite(m)) {
        throw std::invalid_argument("make_density: non-finite entries");
    }
    const double hdef = hermiticity_defect(m);
    if (hdef > tols.herm) {
        throw std::invalid_argument("make_density: herm_tol exceeded (defect " +
                                    std::to_string(hdef) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -tols.psd) {
        throw std::invalid_argument("make_density: psd_tol exceeded (min eigenvalue " +
                                    std::to_string(min_eig) + ")");
    }
    const double tr_err = std::abs(m.trace().real() - 1.0) + std::abs(m.trace().imag());
    if (tr_err > tols.trace) {
        throw std::invalid_argument("make_density: trace_tol exceeded (|Tr - 1| = " +
                                    std::to_string(tr_err) + ")");
    }
    return {std::move(m), std::move(layout), tols.herm, tols.psd, tols.trace};
}

inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<std::string>& discard) {
    LabeledOperator out = partial_trace(rho.labeled(), discard);
    // positivity and trace survive the contraction; revalidation keeps the
    // recorded tolerances honest
    return make_density(std::move(out.mat), std::move(out.layout),
                        {rho.herm_tol, rho.psd_tol, rho.trace_tol});
}

inline DensityOperator marginal(const DensityOperator& rho,
                                const std::vector<std::string>& keep) {
    return partial_trace(rho, rho.layout.complement(keep).labels());
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    LabeledOperator out = tensor(a.labeled(), b.labeled());
    return make_density(std::move(out.mat), std::move(out.layout),
                        {std::max(a.herm_tol, b.herm_tol), std::max(a.psd_tol, b.psd_tol),
                         std::max(a.trace_tol, b.trace_tol)});
}

/// 1/2 ||rho - sigma||_1, in [0, 1].
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.layout != sigma.layout) {
        throw std::invalid_argument("trace_distance: layout mismatch " +
                                    rho.layout.to_string() + " vs " + sigma.layout.to_string());
    }
    return 0.5 * trace_norm(rho.matrix - sigma.matrix);
}

/// Trace distance between states on the same label set, permuting `sigma`
/// into `rho`'s subsystem order first.
inline double marginal_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.layout == sigma.layout) return trace_distance(rho, sigma);
    const LabeledOperator p = permute_subsystems(sigma.labeled(), rho.layout.labels());
    if (p.layout != rho.layout) {
        throw std::invalid_argument("marginal_distance: incompatible layouts " +
                                    rho.layout.to_string() + " vs " + sigma.layout.to_string());
    }
    return 0.5 * trace_norm(rho.matrix - p.mat);
}

/// |v><v| on the given layout.
inline DensityOperator pure_state(const Eigen::VectorXcd& v, SystemLayout layout) {
    const double n2 = v.squaredNorm();
    if (n2 <= 0.0) throw std::invalid_argument("pure_state: zero vector");
    Matrix m = (v * v.adjoint()) / n2;
    return make_density(std::move(m), std::move(layout));
}

/// Computational basis projector |k><k|.
inline DensityOperator basis_state(long k, SystemLayout layout) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(layout.total_dim());
    v(k) = 1.0;
    return pure_state(v, std::move(layout));
}

inline DensityOperator maximally_mixed(SystemLayout layout) {
    const long d = layout.total_dim();
    return make_density(Matrix::Identity(d, d) / static_cast<double>(d), std::move(layout));
}

inline DensityOperator diagonal_density(const RealVector& probs, SystemLayout layout) {
    Matrix m = Matrix::Zero(probs.size(), probs.size());
    for (long i = 0; i < probs.size(); ++i) m(i, i) = probs(i);
    return make_density(std::move(m), std::move(layout));
}

inline Matrix ginibre(long rows, long cols, Rng& rng) {
    Matrix g(rows, cols);
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) {
            g(i, j) = Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
        }
    }
    return g;
}

/// GG^dag / Tr with G of shape dim x rank; deterministic for a fixed seed.
inline DensityOperator random_density(long dim, long rank, std::uint64_t seed,
                                      SystemLayout layout = {}) {
    if (rank < 1 || rank > dim) {
        throw std::invalid_argument("random_density: rank must be in [1, dim]");
    }
    if (layout.size() == 0) layout = SystemLayout{{"S", dim}};
    if (layout.total_dim() != dim) {
        throw std::invalid_argument("random_density: layout dimension mismatch");
    }
    Rng rng(seed);
    const Matrix g = ginibre(dim, rank, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return make_density(std::move(m), std::move(layout));
}

inline DensityOperator random_density(SystemLayout layout, std::uint64_t seed) {
    const long d = layout.total_dim();
    return random_density(d, d, seed, std::move(layout));
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the standard
/// phase fix on R's diagonal.
inline Matrix haar_unitary(long dim, Rng& rng) {
    const Matrix g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (long i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

/// Marginals of a Haar-like random pure state on `layout`.
inline DensityOperator random_pure_density(SystemLayout layout, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd v(layout.total_dim());
    for (long i = 0; i < v.size(); ++i) {
        v(i) = Complex(rng.gaussian(), rng.gaussian());
    }
    return pure_state(v, std::move(layout));
}

}  // namespace qmt
