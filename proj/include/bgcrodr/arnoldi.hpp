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

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bgcrodr/dense_block.hpp"

namespace bgcrodr {

enum class Ortho { mgs, cgs2 };

/// Applies the (possibly preconditioned) operator to a block of vectors.
using BlockOperator = std::function<DenseBlock(ConstBlockView)>;

/// A closing-QR column whose diagonal fell below rank_tol * ||A V||_F and was
/// replaced by a seeded random direction. step == 0 is the starting block.
struct BreakdownEvent {
    std::size_t step = 0;
    std::size_t column = 0;
    double diagonal = 0.0;
};

/// Thrown by arnoldi_start when the starting block is exactly zero.
class ZeroStartBlock : public std::runtime_error {
public:
    ZeroStartBlock() : std::runtime_error("arnoldi: starting block is zero (already converged)") {}
};

/// Block Arnoldi state:
///     (I - C C^T) A W_m = W_{m+1} Hbar_m,   F_m = C^T A W_m.
/// Storage is allocated for `capacity` block steps.
struct ArnoldiFactorization {
    DenseBlock w;      // n x (capacity+1) L
    DenseBlock h_bar;  // (capacity+1) L x capacity L
    DenseBlock f;      // k x capacity L; k == 0 without a recycle space
    DenseBlock z_bar;  // L x L, R factor of the starting block
    std::size_t m = 0;
    std::size_t block_width = 0;
    std::size_t capacity = 0;
    double rank_tol = 1e-12;
    std::uint64_t seed = 0;
    std::vector<BreakdownEvent> breakdowns;

    std::size_t n() const { return w.rows(); }
    std::size_t recycle_dim() const { return f.rows(); }

    /// First `blocks` blocks V_1..V_blocks.
    ConstBlockView basis(std::size_t blocks) const { return w.columns(0, blocks * block_width); }
    /// Hbar_m, (m+1)L x mL.
    ConstBlockView hessenberg() const { return h_bar.view().sub(0, 0, (m + 1) * block_width, m * block_width); }
    /// F_m, k x mL.
    ConstBlockView projection() const { return f.view().sub(0, 0, f.rows(), m * block_width); }
    /// Nonzero rows of block column j (0-based): (j+2)L x L.
    ConstBlockView block_column(std::size_t j) const {
        return h_bar.view().sub(0, j * block_width, (j + 2) * block_width, block_width);
    }
};

/// V_1 Zbar = R0 by reduced QR. Deficient columns are replaced by seeded
/// random directions orthonormal to `c` and the earlier columns.
ArnoldiFactorization arnoldi_start(ConstBlockView r0, std::size_t capacity, ConstBlockView c = {},
                                   double rank_tol = 1e-12, std::uint64_t seed = 0);

/// One block Arnoldi step. With a nonempty `c` the new block is first
/// orthogonalized against C (coefficients stored in F), then against
/// V_1..V_m; MGS follows the textbook loop, CGS2 runs two classical passes
/// over [C W] as dense block products.
void arnoldi_step(ArnoldiFactorization& state, const BlockOperator& op, ConstBlockView c = {},
                  Ortho ortho = Ortho::cgs2);

}  // namespace bgcrodr
