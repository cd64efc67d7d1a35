/*
 *   Copyright 2026 The bgcrodr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Reference computations for tests. Everything here is built on Eigen so it
// shares no code path with the library (which uses its own kernels and LAPACK).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/dense_block.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd to_eigen(bgcrodr::ConstBlockView a) {
    MatrixXd m(a.rows, a.cols);
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t i = 0; i < a.rows; ++i) m(i, j) = a(i, j);
    return m;
}

inline MatrixXd to_eigen(const bgcrodr::CsrMatrix& a) { return to_eigen(a.to_dense()); }

inline bgcrodr::DenseBlock from_eigen(const MatrixXd& m) {
    bgcrodr::DenseBlock b(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) b(i, j) = m(i, j);
    return b;
}

/// Orthonormal basis of range(a) with rank cut at tol * sigma_max.
inline MatrixXd orth(const MatrixXd& a, double tol = 1e-12) {
    if (a.cols() == 0) return MatrixXd(a.rows(), 0);
    Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > tol * s(0)) ++r;
    return svd.matrixU().leftCols(r);
}

/// Largest principal angle between range(a) and range(b) (equal dimensions),
/// from sin(theta_max) = ||(I - Qa Qa^T) Qb||_2, accurate for small angles.
inline double max_principal_angle(const MatrixXd& a, const MatrixXd& b) {
    const MatrixXd qa = orth(a), qb = orth(b);
    if (qa.cols() != qb.cols()) return M_PI / 2;
    const MatrixXd d = qb - qa * (qa.transpose() * qb);
    Eigen::JacobiSVD<MatrixXd> svd(d);
    return std::asin(std::min(1.0, svd.singularValues()(0)));
}

/// Per-column residual of min || r0 - range(q) y || with orthonormal q.
inline std::vector<double> projected_residuals(const MatrixXd& q, const MatrixXd& r0) {
    const MatrixXd r = r0 - q * (q.transpose() * r0);
    std::vector<double> out(r.cols());
    for (Eigen::Index j = 0; j < r.cols(); ++j) out[j] = r.col(j).norm();
    return out;
}

/// Orthonormal basis of the block Krylov space K_m(op, r0), built with two
/// Gram-Schmidt passes per new block.
inline MatrixXd krylov_basis(const MatrixXd& op, const MatrixXd& r0, int m) {
    MatrixXd basis(op.rows(), 0);
    MatrixXd blk = r0;
    for (int j = 0; j < m; ++j) {
        for (int pass = 0; pass < 2; ++pass) blk -= basis * (basis.transpose() * blk);
        const MatrixXd q = orth(blk, 1e-10);
        MatrixXd next(basis.rows(), basis.cols() + q.cols());
        next << basis, q;
        basis = next;
        blk = op * q;
    }
    return basis;
}

/// Per-column minimum residuals of block GMRES with operator `op` from r0
/// after `m` block steps: r0 - P_{op K_m} r0.
inline std::vector<double> gmres_residuals(const MatrixXd& op, const MatrixXd& r0, int m) {
    const MatrixXd k = krylov_basis(op, r0, m);
    return projected_residuals(orth(op * k, 1e-13), r0);
}

/// Givens-rotation least squares for an upper Hessenberg hbar ((m+1) x m)
/// with right-hand side beta e1. Returns the residual after each column.
inline std::vector<double> givens_residuals(const MatrixXd& hbar, double beta) {
    const auto m = hbar.cols();
    MatrixXd h = hbar;
    VectorXd g = VectorXd::Zero(m + 1);
    g(0) = beta;
    std::vector<double> res;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double a = h(j, j), b = h(j + 1, j);
        const double rr = std::hypot(a, b);
        const double c = rr == 0 ? 1.0 : a / rr, s = rr == 0 ? 0.0 : b / rr;
        for (Eigen::Index k = j; k < m; ++k) {
            const double x = h(j, k), y = h(j + 1, k);
            h(j, k) = c * x + s * y;
            h(j + 1, k) = -s * x + c * y;
        }
        const double gx = g(j), gy = g(j + 1);
        g(j) = c * gx + s * gy;
        g(j + 1) = -s * gx + c * gy;
        res.push_back(std::abs(g(j + 1)));
    }
    return res;
}

/// Givens-reduced R factor for the same problem (upper triangular m x m).
inline MatrixXd givens_r(const MatrixXd& hbar) {
    const auto m = hbar.cols();
    MatrixXd h = hbar;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double a = h(j, j), b = h(j + 1, j);
        const double rr = std::hypot(a, b);
        const double c = rr == 0 ? 1.0 : a / rr, s = rr == 0 ? 0.0 : b / rr;
        for (Eigen::Index k = j; k < m; ++k) {
            const double x = h(j, k), y = h(j + 1, k);
            h(j, k) = c * x + s * y;
            h(j + 1, k) = -s * x + c * y;
        }
    }
    return h.topRows(m).triangularView<Eigen::Upper>();
}

/// Flips row signs so the diagonal is nonnegative.
inline MatrixXd normalize_rows(MatrixXd r) {
    for (Eigen::Index i = 0; i < std::min(r.rows(), r.cols()); ++i)
        if (r(i, i) < 0) r.row(i) *= -1.0;
    return r;
}

inline std::vector<double> sorted_real_eigenvalues(const MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

}  // namespace oracle
