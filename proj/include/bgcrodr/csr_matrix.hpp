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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bgcrodr/dense_block.hpp"

namespace bgcrodr {

using index_t = std::int32_t;

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed sparse row matrix. Immutable once constructed.
///
/// Invariants (checked by the constructor): row_ptr has n_rows+1 entries,
/// starts at 0, is nondecreasing and ends at nnz; column indices are strictly
/// increasing within each row and below n_cols.
class CsrMatrix {
public:
    CsrMatrix() : row_ptr_(1, 0) {}
    CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<index_t> row_ptr,
              std::vector<index_t> col_idx, std::vector<double> values);

    /// Sorts entries and sums duplicates.
    static CsrMatrix from_triplets(std::size_t n_rows, std::size_t n_cols, std::vector<Triplet> entries);
    static CsrMatrix identity(std::size_t n);
    static CsrMatrix diagonal(std::span<const double> d);
    /// Entries with |a_ij| == 0 are dropped.
    static CsrMatrix from_dense(ConstBlockView a);

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_cols() const noexcept { return n_cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const index_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const index_t> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Stored value at (i, j), 0 when not stored.
    double at(std::size_t i, std::size_t j) const;
    DenseBlock to_dense() const;
    double frobenius_norm() const;

    bool operator==(const CsrMatrix& o) const = default;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<index_t> row_ptr_;
    std::vector<index_t> col_idx_;
    std::vector<double> values_;
};

/// Y = A X. Rows outer, the L columns of X inner per nonzero; each column
/// accumulates in ascending column-index order, so column j is bitwise equal
/// to spmv(A, X[:, j]).
DenseBlock spmm(const CsrMatrix& a, ConstBlockView x);
/// Single-vector product; `x` must have one column.
DenseBlock spmv(const CsrMatrix& a, ConstBlockView x);

/// Banded test matrix with 2*band+1 diagonals of uniform(0,1) values drawn
/// row by row from a seeded generator, plus n on the main diagonal.
CsrMatrix gen_banded(std::size_t n, std::size_t band, std::uint64_t seed);

/// A + diag(d); inserts diagonal entries that are not stored.
CsrMatrix add_diagonal(const CsrMatrix& a, std::span<const double> d);

/// Sparse matrix with roughly `density * n * n` uniform(-1,1) entries and a
/// full diagonal, seeded. Used by tests and the synthetic benchmarks.
CsrMatrix gen_random_sparse(std::size_t n, double density, std::uint64_t seed, double diag_shift = 0.0);

}  // namespace bgcrodr
