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

#include <vector>

#include "bgcrodr/dense_block.hpp"

namespace bgcrodr {

/// The L Householder reflections that triangularize one block column of a
/// block upper-Hessenberg matrix, accumulated into a single explicit 2L x 2L
/// orthogonal matrix. It acts on rows [row_offset, row_offset + 2L).
struct BlockReflectorSet {
    std::size_t row_offset = 0;
    DenseBlock qt;  // Q_j^T
};

/// Progressive QR of the block least-squares problem
///     min_Y || Hbar_j Y - E_1 Zbar ||_F
/// as Hbar grows by one block column per Arnoldi step.
///
/// Each new block column first receives every stored reflector set, one
/// dense product per set; a fresh set then annihilates its subdiagonal block.
/// The same sets are applied to the right-hand side so the least-squares
/// residual of every column is available without forming Y.
class BlockHessenbergLsq {
public:
    /// `rhs_top` is the L x q block Zbar (or Zbar e1 for an enlarged single
    /// right-hand side). `max_blocks` bounds the number of block columns.
    BlockHessenbergLsq(std::size_t block_width, ConstBlockView rhs_top, std::size_t max_blocks);

    /// Appends block column j (rows 0..(j+2)L of Hbar). Returns the
    /// per-column residual norms after the update.
    const std::vector<double>& add_block_column(ConstBlockView new_block);

    std::size_t blocks() const noexcept { return reflectors_.size(); }
    std::size_t block_width() const noexcept { return width_; }
    const std::vector<double>& residual_norms() const noexcept { return residuals_; }
    double residual_frobenius() const;

    /// Leading jL x jL upper-triangular factor.
    ConstBlockView r_factor() const;
    /// Transformed right-hand side, (j+1)L x q.
    ConstBlockView transformed_rhs() const;
    const std::vector<BlockReflectorSet>& reflectors() const noexcept { return reflectors_; }

    /// Y solving the triangular system; jL x q.
    DenseBlock solve() const;

private:
    std::size_t width_;
    std::size_t max_blocks_;
    DenseBlock r_;    // (max_blocks L) x (max_blocks L)
    DenseBlock rhs_;  // ((max_blocks + 1) L) x q
    std::vector<BlockReflectorSet> reflectors_;
    std::vector<double> residuals_;
};

}  // namespace bgcrodr
