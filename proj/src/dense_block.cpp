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

#include "bgcrodr/dense_block.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"

namespace bgcrodr {

DenseBlock::DenseBlock(ConstBlockView v) : DenseBlock(v.rows, v.cols) { copy_into(v, view()); }

DenseBlock DenseBlock::identity(std::size_t n) {
    DenseBlock id(n, n);
    for (std::size_t i = 0; i < n; ++i) id(i, i) = 1.0;
    return id;
}

DenseBlock DenseBlock::from_rows(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
    if (values.size() != rows * cols) throw DimensionError("from_rows: value count does not match shape");
    DenseBlock b(rows, cols);
    auto it = values.begin();
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) b(i, j) = *it++;
    return b;
}

void DenseBlock::resize(std::size_t rows, std::size_t cols) {
    DenseBlock next(rows, cols);
    const auto r = std::min(rows, rows_);
    const auto c = std::min(cols, cols_);
    if (r && c) copy_into(view().sub(0, 0, r, c), next.view().sub(0, 0, r, c));
    *this = std::move(next);
}

void copy_into(ConstBlockView src, BlockView dst) {
    require_dims(src.rows == dst.rows && src.cols == dst.cols, "copy_into: shape mismatch");
    for (std::size_t j = 0; j < src.cols; ++j) std::copy_n(src.data + j * src.ld, src.rows, dst.data + j * dst.ld);
}

DenseBlock transpose(ConstBlockView a) {
    DenseBlock t(a.cols, a.rows);
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t i = 0; i < a.rows; ++i) t(j, i) = a(i, j);
    return t;
}

DenseBlock matmul(ConstBlockView a, ConstBlockView b) {
    require_dims(a.cols == b.rows, "matmul: inner dimensions differ");
    DenseBlock c(a.rows, b.cols);
    if (a.cols) kernels::gemm_nn(1.0, a, b, c.view());
    return c;
}

DenseBlock matmul_tn(ConstBlockView a, ConstBlockView b) {
    require_dims(a.rows == b.rows, "matmul_tn: row counts differ");
    DenseBlock c(a.cols, b.cols);
    kernels::gemm_tn(a, b, c.view());
    return c;
}

DenseBlock subtract(ConstBlockView a, ConstBlockView b) {
    require_dims(a.rows == b.rows && a.cols == b.cols, "subtract: shape mismatch");
    DenseBlock c(a.rows, a.cols);
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t i = 0; i < a.rows; ++i) c(i, j) = a(i, j) - b(i, j);
    return c;
}

DenseBlock hcat(ConstBlockView a, ConstBlockView b) {
    require_dims(a.rows == b.rows || a.cols == 0 || b.cols == 0, "hcat: row counts differ");
    const auto rows = a.cols ? a.rows : b.rows;
    DenseBlock c(rows, a.cols + b.cols);
    if (a.cols) copy_into(a, c.columns(0, a.cols));
    if (b.cols) copy_into(b, c.columns(a.cols, b.cols));
    return c;
}

double dot(std::span<const double> x, std::span<const double> y) {
    require_dims(x.size() == y.size(), "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) {
    // Scaled to avoid overflow on badly scaled residual blocks.
    double scale = 0.0, ssq = 1.0;
    for (double v : x) {
        if (v == 0.0) continue;
        const double a = std::abs(v);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

double column_norm(ConstBlockView a, std::size_t j) { return norm2(a.col(j)); }

double frobenius_norm(ConstBlockView a) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) {
        const double c = column_norm(a, j);
        s += c * c;
    }
    return std::sqrt(s);
}

double orthogonality_error(ConstBlockView a) {
    auto g = matmul_tn(a, a);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

}  // namespace bgcrodr
