#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "qmt/matrix.hpp"

namespace qmt {

/// Relative support cutoff: eigenvalues <= rel * lambda_max count as kernel.
inline constexpr double kDefaultSupportCutoffRel = 1e-10;
inline constexpr double kDefaultHermTol = 1e-9;
inline constexpr double kDefaultPsdTol = 1e-9;

struct Spectrum {
    RealVector eigenvalues;  // descending
    Matrix eigenvectors;     // columns, same order
    double support_cutoff = 0.0;

    long dim() const { return eigenvalues.size(); }

    long support_rank() const {
        long r = 0;
        while (r < eigenvalues.size() && eigenvalues(r) > support_cutoff) ++r;
        return r;
    }

    bool rank_deficient() const { return support_rank() < dim(); }

    Matrix support_projector() const {
        const long r = support_rank();
        const Matrix v = eigenvectors.leftCols(r);
        return v * v.adjoint();
    }

    Matrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    }
};

/// Eigendecomposition of a Hermitian operator, eigenvalues descending.
/// `cutoff_rel` fixes the support decision recorded in the result.
inline Spectrum spectral(const Matrix& a, double cutoff_rel = kDefaultSupportCutoffRel,
                         double herm_tol = kDefaultHermTol) {
    const double defect = hermiticity_defect(a);
    if (defect > herm_tol) {
        throw std::invalid_argument("spectral: input is not Hermitian (defect " +
                                    std::to_string(defect) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("spectral: eigensolver failed to converge");
    }
    Spectrum s;
    const long n = a.rows();
    s.eigenvalues = es.eigenvalues().reverse();
    s.eigenvectors = es.eigenvectors().rowwise().reverse();
    const double top = n > 0 ? std::max(s.eigenvalues(0), 0.0) : 0.0;
    s.support_cutoff = cutoff_rel * std::max(top, 1e-300);
    return s;
}

enum class ScalarFunc { Sqrt, InvSqrt, Log2, Ln, Power };

/// f applied eigenvalue-wise on the support of a PSD operator; the kernel
/// maps to 0 (so "inverse" and "log" act as pseudo-functions). Power uses
/// lambda^z = exp(z ln lambda), which covers rho^{(1 +/- it)/2}.
inline Matrix op_func_on_support(const Matrix& a, ScalarFunc f,
                                 double cutoff_rel = kDefaultSupportCutoffRel,
                                 Complex power_exponent = Complex(0.0, 0.0),
                                 double psd_tol = kDefaultPsdTol) {
    const Spectrum s = spectral(a, cutoff_rel);
    if (s.dim() > 0 && s.eigenvalues(s.dim() - 1) < -psd_tol) {
        throw std::invalid_argument("op_func_on_support: eigenvalue " +
                                    std::to_string(s.eigenvalues(s.dim() - 1)) +
                                    " below -psd_tol");
    }
    const long n = s.dim();
    Eigen::VectorXcd fvals = Eigen::VectorXcd::Zero(n);
    for (long i = 0; i < n; ++i) {
        const double lam = s.eigenvalues(i);
        if (lam <= s.support_cutoff) continue;
        switch (f) {
            case ScalarFunc::Sqrt: fvals(i) = std::sqrt(lam); break;
            case ScalarFunc::InvSqrt: fvals(i) = 1.0 / std::sqrt(lam); break;
            case ScalarFunc::Log2: fvals(i) = std::log2(lam); break;
            case ScalarFunc::Ln: fvals(i) = std::log(lam); break;
            case ScalarFunc::Power:
                fvals(i) = std::exp(power_exponent * std::log(lam));
                break;
        }
    }
    return s.eigenvectors * fvals.asDiagonal() * s.eigenvectors.adjoint();
}

inline Matrix sqrt_psd(const Matrix& a, double cutoff_rel = kDefaultSupportCutoffRel) {
    return op_func_on_support(a, ScalarFunc::Sqrt, cutoff_rel);
}

inline Matrix inv_sqrt_psd(const Matrix& a, double cutoff_rel = kDefaultSupportCutoffRel) {
    return op_func_on_support(a, ScalarFunc::InvSqrt, cutoff_rel);
}

inline Matrix log2_psd(const Matrix& a, double cutoff_rel = kDefaultSupportCutoffRel) {
    return op_func_on_support(a, ScalarFunc::Log2, cutoff_rel);
}

inline Matrix cpow_psd(const Matrix& a, Complex z,
                       double cutoff_rel = kDefaultSupportCutoffRel) {
    return op_func_on_support(a, ScalarFunc::Power, cutoff_rel, z);
}

}  // namespace qmt
