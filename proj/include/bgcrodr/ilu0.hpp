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

#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/dense_block.hpp"

namespace bgcrodr {

/// Zero fill-in incomplete LU factors.
struct Ilu0Factors {
    CsrMatrix lower;  // strictly lower part; unit diagonal implicit
    CsrMatrix upper;  // upper part including the diagonal
    std::size_t n() const { return upper.n_rows(); }
};

/// IKJ ILU(0) restricted to the sparsity pattern of `a`. Throws
/// SingularError naming the row of a missing or zero pivot.
Ilu0Factors ilu0(const CsrMatrix& a);

/// U^{-1} (L^{-1} X), both triangular solves sweeping all columns per row.
DenseBlock apply_precond(const Ilu0Factors& f, ConstBlockView x);

}  // namespace bgcrodr
