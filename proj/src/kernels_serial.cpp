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

#include <vector>

#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"

namespace bgcrodr::kernels::serial {

void spmm(const CsrMatrix& a, ConstBlockView x, BlockView y) {
    require_dims(a.n_cols() == x.rows, "spmm: A.n_cols != X.n");
    require_dims(a.n_rows() == y.rows && x.cols == y.cols, "spmm: output shape mismatch");
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto v = a.values();
    std::vector<double> acc(x.cols);
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            const double aik = v[k];
            const auto c = static_cast<std::size_t>(ci[k]);
            for (std::size_t l = 0; l < x.cols; ++l) acc[l] += aik * x(c, l);
        }
        for (std::size_t l = 0; l < x.cols; ++l) y(i, l) = acc[l];
    }
}

void gemm_tn(ConstBlockView a, ConstBlockView b, BlockView c) {
    require_dims(a.rows == b.rows, "gemm_tn: row counts differ");
    require_dims(c.rows == a.cols && c.cols == b.cols, "gemm_tn: output shape mismatch");
    for (std::size_t j = 0; j < b.cols; ++j)
        for (std::size_t i = 0; i < a.cols; ++i) {
            double s = 0.0;
            for (std::size_t r = 0; r < a.rows; ++r) s += a(r, i) * b(r, j);
            c(i, j) = s;
        }
}

void gemm_nn(double alpha, ConstBlockView a, ConstBlockView m, BlockView y) {
    require_dims(a.cols == m.rows, "gemm_nn: inner dimensions differ");
    require_dims(y.rows == a.rows && y.cols == m.cols, "gemm_nn: output shape mismatch");
    for (std::size_t j = 0; j < m.cols; ++j)
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double coef = alpha * m(i, j);
            if (coef == 0.0) continue;
            for (std::size_t r = 0; r < a.rows; ++r) y(r, j) += coef * a(r, i);
        }
}

}  // namespace bgcrodr::kernels::serial
