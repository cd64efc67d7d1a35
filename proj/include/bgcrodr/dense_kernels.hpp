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

#include <complex>
#include <cstdint>
#include <vector>

#include "bgcrodr/dense_block.hpp"

namespace bgcrodr {

/// Thin QR factors X = q * r_factor.
struct QrFactors {
    DenseBlock q;         // n x r, orthonormal columns
    DenseBlock r_factor;  // r x r, upper triangular, nonnegative diagonal
    std::size_t rank = 0;
    /// deficient[j]: |r_jj| <= rank_tol * ||X||_F
    std::vector<bool> deficient;
};

/// Householder thin QR. Signs are normalized so that diag(r_factor) >= 0;
/// rank deficiency is reported through `deficient`, never thrown.
QrFactors reduced_qr(ConstBlockView x, double rank_tol = 1e-12);

/// Solves rf * Y = rhs by back substitution. Throws SingularError naming the
/// column whose diagonal has |r_ii| <= 1e-14 * ||rf||_F.
DenseBlock solve_triangular(ConstBlockView rf, ConstBlockView rhs);

/// Solves a * Y = rhs (or a^T * Y = rhs) with partial-pivoting LU.
/// Throws SingularError on an exactly zero pivot.
DenseBlock solve_dense(ConstBlockView a, ConstBlockView rhs, bool transpose = false);

enum class PairKind : std::uint8_t { real, first_of_pair, second_of_pair };

/// Eigenpairs of a real matrix. A conjugate pair (a +- ib) occupies two
/// adjacent entries; its vector is stored as (real part, imaginary part) in
/// the corresponding two columns of `vectors`.
struct EigPairs {
    std::vector<std::complex<double>> values;
    DenseBlock vectors;
    std::vector<PairKind> pairing;

    std::size_t size() const { return values.size(); }
    /// Complex eigenvector for entry j (conjugated for the second of a pair).
    std::vector<std::complex<double>> vector(std::size_t j) const;
};

/// All eigenpairs via Hessenberg reduction and shifted QR (LAPACK dgeev).
/// Throws ConvergenceError with the index of the first unconverged value.
EigPairs eig_standard(ConstBlockView m);

/// Pairs of ag * t = theta * bg * t via eig_standard(bg^{-1} ag). Throws
/// SingularError when the reciprocal condition estimate of bg is below 1e-14.
EigPairs eig_generalized(ConstBlockView ag, ConstBlockView bg);

}  // namespace bgcrodr
