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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bgcrodr/arnoldi.hpp"
#include "bgcrodr/dense_block.hpp"
#include "bgcrodr/dense_kernels.hpp"

namespace bgcrodr {

enum class RecycleOrigin : std::uint32_t { fresh = 0, end_of_cycle = 1, cross_system = 2 };

const char* to_string(RecycleOrigin o);

/// Recycle space (U, C) with A U = C and C^T C = I for the operator it was
/// last prepared against. The projectors C C^T and U C^T A are never formed.
struct RecycleSpace {
    DenseBlock u;  // n x k
    DenseBlock c;  // n x k
    RecycleOrigin origin = RecycleOrigin::fresh;

    std::size_t k() const { return u.cols(); }
    std::size_t n() const { return u.rows(); }
};

using EventLog = std::vector<std::string>;

/// Harmonic Ritz pairs of the current search space and the retained subset.
/// `coeffs` expresses the retained directions in the current basis
/// ([U~ W_m] or W_m); a conjugate pair contributes its real and imaginary
/// parts as two adjacent columns.
struct HarmonicRitzSelection {
    EigPairs pairs;
    std::vector<std::size_t> keep;
    DenseBlock coeffs;
};

/// Keeps the `k_target` values of smallest modulus. A conjugate pair cut by
/// the boundary is kept whole, so at most k_target + 1 values survive.
HarmonicRitzSelection select_smallest(EigPairs pairs, std::size_t k_target);

/// Harmonic Ritz pairs of K_m(A, R0) from an Arnoldi factorization built
/// without a recycle space: eigenpairs of H_m with its last L columns
/// corrected by H_m^{-T} E (H_{m+1,m}^T H_{m+1,m}). Throws SingularError when
/// H_m is singular.
HarmonicRitzSelection harmonic_ritz_krylov(const ArnoldiFactorization& fact, std::size_t k_target);

/// Column scaling d with U diag(d) having unit columns.
std::vector<double> unit_column_scaling(ConstBlockView u);

/// [[D, F_m], [0, Hbar_m]].
DenseBlock augmented_hessenberg(const ArnoldiFactorization& fact, std::span<const double> d_scale);

/// Harmonic Ritz pairs over U + K_m((I - C C^T) A, R0) from
///     G^T G t = theta G^T (W~_{m+1}^T W^_m) t
/// with the cross-Gram assembled from C^T U~, W_{m+1}^T U~ and the identity
/// block. Throws SingularError when the right-hand matrix is degenerate.
HarmonicRitzSelection harmonic_ritz_augmented(const ArnoldiFactorization& fact, const RecycleSpace& rs,
                                              std::span<const double> d_scale, std::size_t k_target);

/// New recycle space from a selection. A U_new = W~ (G T), so a small QR of
/// G T yields C_new without touching A. Directions whose R diagonal
/// collapses are dropped (logged).
RecycleSpace update_recycle_space(const ArnoldiFactorization& fact, const RecycleSpace* rs,
                                  const HarmonicRitzSelection& selection, std::span<const double> d_scale = {},
                                  EventLog* log = nullptr);

/// Re-establishes A_new U = C for a new operator: thin QR A_new U = C S,
/// U <- U S^{-1}. Directions that collapse under A_new are dropped (logged).
RecycleSpace prepare_cross_system(const RecycleSpace& rs, const BlockOperator& op_new, EventLog* log = nullptr);

/// Binary persistence: 16-byte header ("BGCRDRRS", u32 version, u32 origin),
/// u64 n, u64 k, then U and C column-major, little-endian doubles.
void save_recycle_space(const RecycleSpace& rs, const std::filesystem::path& path);
RecycleSpace load_recycle_space(const std::filesystem::path& path);

}  // namespace bgcrodr
