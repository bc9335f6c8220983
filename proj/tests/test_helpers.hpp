#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "qmt/density.hpp"
#include "qmt/tensor.hpp"

namespace qmt::test {

inline DensityOperator bell_phi_plus(SystemLayout layout = {{"A", 2}, {"B", 2}}) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return pure_state(v, std::move(layout));
}

inline DensityOperator bell_phi_minus(SystemLayout layout = {{"A", 2}, {"B", 2}}) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = 1.0 / std::sqrt(2.0);
    v(3) = -1.0 / std::sqrt(2.0);
    return pure_state(v, std::move(layout));
}

inline DensityOperator ghz(SystemLayout layout = {{"A", 2}, {"B", 2}, {"C", 2}}) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
    v(0) = v(7) = 1.0 / std::sqrt(2.0);
    return pure_state(v, std::move(layout));
}

/// 1/2 (|000><000| + |111><111|) on three qubits.
inline DensityOperator ghz_dephased(SystemLayout layout = {{"A", 2}, {"B", 2}, {"C", 2}}) {
    Matrix m = Matrix::Zero(8, 8);
    m(0, 0) = m(7, 7) = 0.5;
    return make_density(std::move(m), std::move(layout));
}

inline void require_close(const Matrix& a, const Matrix& b, double tol,
                          const std::string& what = "matrices") {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    INFO(what << ": max |diff| = " << max_abs(a - b));
    REQUIRE(max_abs(a - b) <= tol);
}

}  // namespace qmt::test
