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

#include "bgcrodr/dense_kernels.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "bgcrodr/errors.hpp"

namespace bgcrodr {

namespace {

// Householder vector for x (LAPACK dlarfg convention): H = I - tau v v^T with
// v[0] = 1 and H x = beta e1. Returns beta; v overwrites x[1:].
double make_reflector(std::span<double> x, double& tau) {
    const double alpha = x[0];
    const double sigma = norm2(x.subspan(1));
    if (sigma == 0.0) {
        tau = 0.0;
        return alpha;
    }
    const double beta = -std::copysign(std::hypot(alpha, sigma), alpha);
    tau = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] *= scale;
    return beta;
}

// Applies H = I - tau v v^T (v[0] implicit 1) to rows [0, v.size()) of y.
void apply_reflector(std::span<const double> v, double tau, BlockView y) {
    if (tau == 0.0) return;
    for (std::size_t c = 0; c < y.cols; ++c) {
        double* col = y.data + c * y.ld;
        double s = col[0];
        for (std::size_t i = 1; i < v.size(); ++i) s += v[i] * col[i];
        s *= tau;
        col[0] -= s;
        for (std::size_t i = 1; i < v.size(); ++i) col[i] -= s * v[i];
    }
}

}  // namespace

QrFactors reduced_qr(ConstBlockView x, double rank_tol) {
    require_dims(x.rows >= x.cols, "reduced_qr: requires rows >= cols");
    const auto n = x.rows;
    const auto l = x.cols;
    DenseBlock work(x);
    std::vector<double> tau(l, 0.0);
    QrFactors f;
    f.r_factor = DenseBlock(l, l);
    for (std::size_t j = 0; j < l; ++j) {
        auto col = work.col(j).subspan(j);
        const double beta = make_reflector(col, tau[j]);
        apply_reflector(col, tau[j], work.view().sub(j, j + 1, n - j, l - j - 1));
        for (std::size_t i = 0; i < j; ++i) f.r_factor(i, j) = work(i, j);
        f.r_factor(j, j) = beta;
    }
    f.q = DenseBlock(n, l);
    for (std::size_t j = 0; j < l; ++j) f.q(j, j) = 1.0;
    for (std::size_t jj = l; jj-- > 0;) {
        std::span<const double> v(work.col(jj).subspan(jj));
        apply_reflector(v, tau[jj], f.q.view().sub(jj, 0, n - jj, l));
    }
    for (std::size_t j = 0; j < l; ++j) {
        if (f.r_factor(j, j) < 0.0) {
            for (std::size_t c = j; c < l; ++c) f.r_factor(j, c) = -f.r_factor(j, c);
            for (auto& v : f.q.col(j)) v = -v;
        }
    }
    const double xnorm = frobenius_norm(x);
    f.deficient.assign(l, false);
    for (std::size_t j = 0; j < l; ++j) {
        f.deficient[j] = std::abs(f.r_factor(j, j)) <= rank_tol * xnorm;
        if (!f.deficient[j]) ++f.rank;
    }
    return f;
}

DenseBlock solve_triangular(ConstBlockView rf, ConstBlockView rhs) {
    require_dims(rf.rows == rf.cols && rf.rows == rhs.rows, "solve_triangular: shape mismatch");
    const auto k = rf.rows;
    const double tol = 1e-14 * frobenius_norm(rf);
    for (std::size_t i = 0; i < k; ++i)
        if (!(std::abs(rf(i, i)) > tol)) throw SingularError("solve_triangular: singular diagonal", i);
    DenseBlock y(rhs);
    for (std::size_t c = 0; c < y.cols(); ++c) {
        for (std::size_t i = k; i-- > 0;) {
            double s = y(i, c);
            for (std::size_t j = i + 1; j < k; ++j) s -= rf(i, j) * y(j, c);
            y(i, c) = s / rf(i, i);
        }
    }
    return y;
}

DenseBlock solve_dense(ConstBlockView a, ConstBlockView rhs, bool transpose) {
    require_dims(a.rows == a.cols && a.rows == rhs.rows, "solve_dense: shape mismatch");
    const auto n = static_cast<lapack_int>(a.rows);
    if (n == 0) return DenseBlock(0, rhs.cols);
    DenseBlock lu(a);
    DenseBlock y(rhs);
    std::vector<lapack_int> piv(a.rows);
    auto info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu.data(), n, piv.data());
    if (info > 0) throw SingularError("solve_dense: zero pivot", static_cast<std::size_t>(info - 1));
    info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, transpose ? 'T' : 'N', n, static_cast<lapack_int>(rhs.cols), lu.data(),
                          n, piv.data(), y.data(), n);
    if (info != 0) throw std::runtime_error("solve_dense: dgetrs failed");
    return y;
}

std::vector<std::complex<double>> EigPairs::vector(std::size_t j) const {
    const auto n = vectors.rows();
    std::vector<std::complex<double>> v(n);
    switch (pairing[j]) {
        case PairKind::real:
            for (std::size_t i = 0; i < n; ++i) v[i] = vectors(i, j);
            break;
        case PairKind::first_of_pair:
            for (std::size_t i = 0; i < n; ++i) v[i] = {vectors(i, j), vectors(i, j + 1)};
            break;
        case PairKind::second_of_pair:
            for (std::size_t i = 0; i < n; ++i) v[i] = {vectors(i, j - 1), -vectors(i, j)};
            break;
    }
    return v;
}

EigPairs eig_standard(ConstBlockView m) {
    require_dims(m.rows == m.cols, "eig_standard: matrix must be square");
    const auto n = static_cast<lapack_int>(m.rows);
    EigPairs out;
    out.vectors = DenseBlock(m.rows, m.rows);
    if (n == 0) return out;
    DenseBlock a(m);
    std::vector<double> wr(m.rows), wi(m.rows);
    double dummy = 0.0;
    const auto info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, wr.data(), wi.data(), &dummy, 1,
                                    out.vectors.data(), n);
    if (info > 0) throw ConvergenceError("eig_standard: QR iteration did not converge", static_cast<std::size_t>(info - 1));
    if (info < 0) throw std::runtime_error("eig_standard: invalid dgeev argument");
    out.values.resize(m.rows);
    out.pairing.assign(m.rows, PairKind::real);
    for (std::size_t j = 0; j < m.rows; ++j) {
        out.values[j] = {wr[j], wi[j]};
        if (wi[j] != 0.0) {
            out.pairing[j] = PairKind::first_of_pair;
            out.pairing[j + 1] = PairKind::second_of_pair;
            out.values[j + 1] = {wr[j + 1], wi[j + 1]};
            ++j;
        }
    }
    return out;
}

EigPairs eig_generalized(ConstBlockView ag, ConstBlockView bg) {
    require_dims(ag.rows == ag.cols && bg.rows == bg.cols && ag.rows == bg.rows, "eig_generalized: shape mismatch");
    const auto n = static_cast<lapack_int>(bg.rows);
    if (n == 0) return eig_standard(ag);
    DenseBlock lu(bg);
    std::vector<lapack_int> piv(bg.rows);
    const double anorm = LAPACKE_dlange(LAPACK_COL_MAJOR, '1', n, n, lu.data(), n);
    auto info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu.data(), n, piv.data());
    if (info > 0) throw SingularError("eig_generalized: degenerate right-hand matrix", static_cast<std::size_t>(info - 1));
    double rcond = 0.0;
    info = LAPACKE_dgecon(LAPACK_COL_MAJOR, '1', n, lu.data(), n, anorm, &rcond);
    if (info != 0 || !(rcond >= 1e-14))
        throw SingularError("eig_generalized: right-hand matrix condition estimate exceeds 1e14", 0);
    DenseBlock m(ag);
    info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, n, lu.data(), n, piv.data(), m.data(), n);
    if (info != 0) throw std::runtime_error("eig_generalized: dgetrs failed");
    return eig_standard(m);
}

}  // namespace bgcrodr
