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

#include "bgcrodr/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"
#include "bgcrodr/random.hpp"

namespace bgcrodr {

CsrMatrix::CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<index_t> row_ptr,
                     std::vector<index_t> col_idx, std::vector<double> values)
    : n_rows_(n_rows), n_cols_(n_cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (n_rows > static_cast<std::size_t>(std::numeric_limits<index_t>::max()) ||
        n_cols > static_cast<std::size_t>(std::numeric_limits<index_t>::max()))
        throw DimensionError("CsrMatrix: dimension exceeds index range");
    if (row_ptr_.size() != n_rows_ + 1) throw DimensionError("CsrMatrix: row_ptr must have n_rows+1 entries");
    if (col_idx_.size() != values_.size()) throw DimensionError("CsrMatrix: col_idx and values differ in length");
    if (row_ptr_.front() != 0) throw std::invalid_argument("CsrMatrix: row_ptr[0] must be 0");
    if (static_cast<std::size_t>(row_ptr_.back()) != values_.size())
        throw std::invalid_argument("CsrMatrix: row_ptr[n_rows] must equal nnz");
    for (std::size_t i = 0; i < n_rows_; ++i) {
        if (row_ptr_[i + 1] < row_ptr_[i]) throw std::invalid_argument("CsrMatrix: row_ptr decreases at row " + std::to_string(i));
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (col_idx_[k] < 0 || static_cast<std::size_t>(col_idx_[k]) >= n_cols_)
                throw std::invalid_argument("CsrMatrix: column index out of range in row " + std::to_string(i));
            if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
                throw std::invalid_argument("CsrMatrix: column indices not strictly increasing in row " +
                                            std::to_string(i));
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols, std::vector<Triplet> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    std::vector<index_t> row_ptr(n_rows + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& t = entries[k];
        if (t.row >= n_rows || t.col >= n_cols) throw DimensionError("from_triplets: entry outside matrix");
        if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
            vals.back() += t.value;
            continue;
        }
        cols.push_back(static_cast<index_t>(t.col));
        vals.push_back(t.value);
        ++row_ptr[t.row + 1];
    }
    for (std::size_t i = 0; i < n_rows; ++i) row_ptr[i + 1] += row_ptr[i];
    return {n_rows, n_cols, std::move(row_ptr), std::move(cols), std::move(vals)};
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
    std::vector<double> ones(n, 1.0);
    return diagonal(ones);
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> d) {
    const auto n = d.size();
    std::vector<index_t> rp(n + 1), ci(n);
    for (std::size_t i = 0; i < n; ++i) {
        rp[i + 1] = static_cast<index_t>(i + 1);
        ci[i] = static_cast<index_t>(i);
    }
    return {n, n, std::move(rp), std::move(ci), std::vector<double>(d.begin(), d.end())};
}

CsrMatrix CsrMatrix::from_dense(ConstBlockView a) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (a(i, j) != 0.0) t.push_back({i, j, a(i, j)});
    return from_triplets(a.rows, a.cols, std::move(t));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
    const auto first = col_idx_.begin() + row_ptr_[i];
    const auto last = col_idx_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(first, last, static_cast<index_t>(j));
    return (it != last && *it == static_cast<index_t>(j)) ? values_[it - col_idx_.begin()] : 0.0;
}

DenseBlock CsrMatrix::to_dense() const {
    DenseBlock d(n_rows_, n_cols_);
    for (std::size_t i = 0; i < n_rows_; ++i)
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
    return d;
}

double CsrMatrix::frobenius_norm() const { return norm2(values_); }

DenseBlock spmm(const CsrMatrix& a, ConstBlockView x) {
    require_dims(a.n_cols() == x.rows, "spmm: A.n_cols != X.n");
    DenseBlock y(a.n_rows(), x.cols);
    kernels::spmm(a, x, y.view());
    return y;
}

DenseBlock spmv(const CsrMatrix& a, ConstBlockView x) {
    require_dims(x.cols == 1, "spmv: x must have exactly one column");
    return spmm(a, x);
}

CsrMatrix gen_banded(std::size_t n, std::size_t band, std::uint64_t seed) {
    if (2 * band + 1 > n) throw std::invalid_argument("gen_banded: 2*band+1 exceeds n");
    Rng rng(seed);
    std::vector<index_t> rp(n + 1, 0);
    std::vector<index_t> ci;
    std::vector<double> v;
    const std::size_t est = n * (2 * band + 1);
    ci.reserve(est);
    v.reserve(est);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= band ? i - band : 0;
        const std::size_t hi = std::min(n - 1, i + band);
        for (std::size_t j = lo; j <= hi; ++j) {
            double val = uniform01(rng);
            if (j == i) val += static_cast<double>(n);
            ci.push_back(static_cast<index_t>(j));
            v.push_back(val);
        }
        rp[i + 1] = static_cast<index_t>(ci.size());
    }
    return {n, n, std::move(rp), std::move(ci), std::move(v)};
}

CsrMatrix add_diagonal(const CsrMatrix& a, std::span<const double> d) {
    require_dims(a.n_rows() == a.n_cols() && d.size() == a.n_rows(), "add_diagonal: shape mismatch");
    std::vector<index_t> rp(a.n_rows() + 1, 0);
    std::vector<index_t> ci;
    std::vector<double> v;
    ci.reserve(a.nnz() + a.n_rows());
    v.reserve(a.nnz() + a.n_rows());
    const auto arp = a.row_ptr();
    const auto aci = a.col_idx();
    const auto av = a.values();
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        bool placed = false;
        for (index_t k = arp[i]; k < arp[i + 1]; ++k) {
            const auto c = static_cast<std::size_t>(aci[k]);
            if (!placed && c > i) {
                ci.push_back(static_cast<index_t>(i));
                v.push_back(d[i]);
                placed = true;
            }
            ci.push_back(aci[k]);
            v.push_back(c == i ? av[k] + d[i] : av[k]);
            if (c == i) placed = true;
        }
        if (!placed) {
            ci.push_back(static_cast<index_t>(i));
            v.push_back(d[i]);
        }
        rp[i + 1] = static_cast<index_t>(ci.size());
    }
    return {a.n_rows(), a.n_cols(), std::move(rp), std::move(ci), std::move(v)};
}

CsrMatrix gen_random_sparse(std::size_t n, double density, std::uint64_t seed, double diag_shift) {
    Rng rng(seed);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, diag_shift + (2.0 * uniform01(rng) - 1.0)});
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && uniform01(rng) < density) t.push_back({i, j, 2.0 * uniform01(rng) - 1.0});
    }
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace bgcrodr
