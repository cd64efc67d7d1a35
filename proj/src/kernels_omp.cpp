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

#include <omp.h>

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"

namespace bgcrodr::kernels {

namespace {

constexpr std::size_t kRowChunk = 4096;

// Fixed-width accumulators let the compiler keep the L partial sums in
// registers; the update order per (row, column) matches serial::spmm.
template <std::size_t LB>
void spmm_rows_fixed(const CsrMatrix& a, ConstBlockView x, BlockView y, std::size_t r0, std::size_t r1) {
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto v = a.values();
    for (std::size_t i = r0; i < r1; ++i) {
        std::array<double, LB> acc{};
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            const double aik = v[k];
            const double* xc = x.data + ci[k];
            for (std::size_t l = 0; l < LB; ++l) acc[l] += aik * xc[l * x.ld];
        }
        for (std::size_t l = 0; l < LB; ++l) y(i, l) = acc[l];
    }
}

void spmm_rows_generic(const CsrMatrix& a, ConstBlockView x, BlockView y, std::size_t r0, std::size_t r1) {
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto v = a.values();
    std::vector<double> acc(x.cols);
    for (std::size_t i = r0; i < r1; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            const double aik = v[k];
            const double* xc = x.data + ci[k];
            for (std::size_t l = 0; l < x.cols; ++l) acc[l] += aik * xc[l * x.ld];
        }
        for (std::size_t l = 0; l < x.cols; ++l) y(i, l) = acc[l];
    }
}

using RowKernel = void (*)(const CsrMatrix&, ConstBlockView, BlockView, std::size_t, std::size_t);

template <std::size_t... Ls>
constexpr auto make_table(std::index_sequence<Ls...>) {
    return std::array<RowKernel, sizeof...(Ls)>{&spmm_rows_fixed<Ls + 1>...};
}

constexpr auto kFixedKernels = make_table(std::make_index_sequence<20>{});

RowKernel select_row_kernel(std::size_t width) {
    if (width >= 1 && width <= kFixedKernels.size()) return kFixedKernels[width - 1];
    return &spmm_rows_generic;
}

}  // namespace

namespace omp {

void spmm(const CsrMatrix& a, ConstBlockView x, BlockView y) {
    require_dims(a.n_cols() == x.rows, "spmm: A.n_cols != X.n");
    require_dims(a.n_rows() == y.rows && x.cols == y.cols, "spmm: output shape mismatch");
    if (x.cols == 0) return;
    const auto kernel = select_row_kernel(x.cols);
    const auto n = static_cast<std::ptrdiff_t>(a.n_rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r0 = 0; r0 < n; r0 += static_cast<std::ptrdiff_t>(kRowChunk)) {
        const auto r1 = std::min<std::ptrdiff_t>(n, r0 + static_cast<std::ptrdiff_t>(kRowChunk));
        kernel(a, x, y, static_cast<std::size_t>(r0), static_cast<std::size_t>(r1));
    }
}

void gemm_tn(ConstBlockView a, ConstBlockView b, BlockView c) {
    require_dims(a.rows == b.rows, "gemm_tn: row counts differ");
    require_dims(c.rows == a.cols && c.cols == b.cols, "gemm_tn: output shape mismatch");
    constexpr std::size_t kCols = 8;
    const auto na = static_cast<std::ptrdiff_t>(a.cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < na; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double* ai = a.data + i * a.ld;
        for (std::size_t j0 = 0; j0 < b.cols; j0 += kCols) {
            const auto nj = std::min(kCols, b.cols - j0);
            std::array<double, kCols> s{};
            for (std::size_t r = 0; r < a.rows; ++r) {
                const double ar = ai[r];
                for (std::size_t jj = 0; jj < nj; ++jj) s[jj] += ar * b.data[r + (j0 + jj) * b.ld];
            }
            for (std::size_t jj = 0; jj < nj; ++jj) c(i, j0 + jj) = s[jj];
        }
    }
}

void gemm_nn(double alpha, ConstBlockView a, ConstBlockView m, BlockView y) {
    require_dims(a.cols == m.rows, "gemm_nn: inner dimensions differ");
    require_dims(y.rows == a.rows && y.cols == m.cols, "gemm_nn: output shape mismatch");
    const auto n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r0 = 0; r0 < n; r0 += static_cast<std::ptrdiff_t>(kRowChunk)) {
        const auto lo = static_cast<std::size_t>(r0);
        const auto hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(n, r0 + static_cast<std::ptrdiff_t>(kRowChunk)));
        for (std::size_t j = 0; j < m.cols; ++j) {
            double* yj = y.data + j * y.ld;
            for (std::size_t i = 0; i < a.cols; ++i) {
                const double coef = alpha * m(i, j);
                if (coef == 0.0) continue;
                const double* ai = a.data + i * a.ld;
                for (std::size_t r = lo; r < hi; ++r) yj[r] += coef * ai[r];
            }
        }
    }
}

}  // namespace omp

int max_threads() { return omp_get_max_threads(); }
void set_threads(int n) { omp_set_num_threads(n < 1 ? 1 : n); }

}  // namespace bgcrodr::kernels
