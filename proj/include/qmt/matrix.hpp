#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <complex>
#include <stdexcept>

namespace qmt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline Matrix dagger(const Matrix& a) { return a.adjoint(); }

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

inline double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double frobenius(const Matrix& a) { return a.norm(); }

/// ||A - A^dagger||_max
inline double hermiticity_defect(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermiticity_defect: non-square matrix");
    return max_abs(a - a.adjoint());
}

inline bool is_hermitian(const Matrix& a, double tol) { return hermiticity_defect(a) <= tol; }

struct NormalityReport {
    bool normal = false;
    double residual = 0.0;  // ||AA^dag - A^dag A||_F / max(1, ||A||_F^2)
};

inline NormalityReport is_normal(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("is_normal: non-square matrix");
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    const double scale = std::max(1.0, a.squaredNorm());
    NormalityReport r;
    r.residual = comm.norm() / scale;
    r.normal = r.residual <= tol;
    return r;
}

/// Schatten-1 norm (sum of singular values). Hermitian inputs take the
/// cheaper eigenvalue route.
inline double trace_norm(const Matrix& a) {
    if (a.rows() == a.cols() && hermiticity_defect(a) <= 1e-12 * std::max(1.0, max_abs(a))) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

inline Matrix identity(long dim) { return Matrix::Identity(dim, dim); }

/// Kronecker product with the leftmost factor most significant:
/// (A (x) B)[(ia,ib),(ja,jb)] = A(ia,ja) B(ib,jb).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i) {
        for (long j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace qmt
