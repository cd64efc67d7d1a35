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

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace bgcrodr {

/// Read-only column-major view. Column j starts at data + j*ld.
struct ConstBlockView {
    const double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t ld = 0;

    double operator()(std::size_t i, std::size_t j) const { return data[i + j * ld]; }
    std::span<const double> col(std::size_t j) const { return {data + j * ld, rows}; }

    ConstBlockView columns(std::size_t first, std::size_t count) const {
        assert(first + count <= cols);
        return {data + first * ld, rows, count, ld};
    }
    ConstBlockView sub(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        assert(r0 + nr <= rows && c0 + nc <= cols);
        return {data + r0 + c0 * ld, nr, nc, ld};
    }
};

/// Mutable column-major view.
struct BlockView {
    double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t ld = 0;

    double& operator()(std::size_t i, std::size_t j) const { return data[i + j * ld]; }
    std::span<double> col(std::size_t j) const { return {data + j * ld, rows}; }

    BlockView columns(std::size_t first, std::size_t count) const {
        assert(first + count <= cols);
        return {data + first * ld, rows, count, ld};
    }
    BlockView sub(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        assert(r0 + nr <= rows && c0 + nc <= cols);
        return {data + r0 + c0 * ld, nr, nc, ld};
    }
    operator ConstBlockView() const { return {data, rows, cols, ld}; }
};

/// An n x L block of vectors stored column-major with column stride n.
/// Also used for the small dense matrices of the projected problems.
class DenseBlock {
public:
    DenseBlock() = default;
    DenseBlock(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    explicit DenseBlock(ConstBlockView v);

    static DenseBlock identity(std::size_t n);
    /// Row-major initializer, convenient for small literal matrices in tests.
    static DenseBlock from_rows(std::size_t rows, std::size_t cols, std::initializer_list<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

    std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    BlockView view() noexcept { return {data_.data(), rows_, cols_, rows_}; }
    ConstBlockView view() const noexcept { return {data_.data(), rows_, cols_, rows_}; }
    ConstBlockView cview() const noexcept { return view(); }
    operator ConstBlockView() const noexcept { return view(); }

    BlockView columns(std::size_t first, std::size_t count) { return view().columns(first, count); }
    ConstBlockView columns(std::size_t first, std::size_t count) const { return view().columns(first, count); }

    /// Keeps the leading min(rows) x min(cols) entries, zero-fills the rest.
    void resize(std::size_t rows, std::size_t cols);

    bool operator==(const DenseBlock& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Small dense helpers. Tall-block products route through kernels::.

DenseBlock transpose(ConstBlockView a);
/// a * b
DenseBlock matmul(ConstBlockView a, ConstBlockView b);
/// a^T * b
DenseBlock matmul_tn(ConstBlockView a, ConstBlockView b);
/// a - b
DenseBlock subtract(ConstBlockView a, ConstBlockView b);
/// [a b]
DenseBlock hcat(ConstBlockView a, ConstBlockView b);
void copy_into(ConstBlockView src, BlockView dst);

double frobenius_norm(ConstBlockView a);
double column_norm(ConstBlockView a, std::size_t j);
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// ||a^T a - I||_F
double orthogonality_error(ConstBlockView a);

}  // namespace bgcrodr
