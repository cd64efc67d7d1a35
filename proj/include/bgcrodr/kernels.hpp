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

// Bandwidth-bound inner kernels. Each has a serial reference and an OpenMP
// version that splits rows (or output entries) across threads while keeping
// the per-entry summation order, so both produce bitwise identical results.

#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/dense_block.hpp"

namespace bgcrodr::kernels {

namespace serial {
/// y = A x (overwrites y).
void spmm(const CsrMatrix& a, ConstBlockView x, BlockView y);
/// c = a^T b (overwrites c).
void gemm_tn(ConstBlockView a, ConstBlockView b, BlockView c);
/// y += alpha * a * m.
void gemm_nn(double alpha, ConstBlockView a, ConstBlockView m, BlockView y);
}  // namespace serial

namespace omp {
void spmm(const CsrMatrix& a, ConstBlockView x, BlockView y);
void gemm_tn(ConstBlockView a, ConstBlockView b, BlockView c);
void gemm_nn(double alpha, ConstBlockView a, ConstBlockView m, BlockView y);
}  // namespace omp

// Default dispatch used by the library.
inline void spmm(const CsrMatrix& a, ConstBlockView x, BlockView y) { omp::spmm(a, x, y); }
inline void gemm_tn(ConstBlockView a, ConstBlockView b, BlockView c) { omp::gemm_tn(a, b, c); }
inline void gemm_nn(double alpha, ConstBlockView a, ConstBlockView m, BlockView y) { omp::gemm_nn(alpha, a, m, y); }

int max_threads();
void set_threads(int n);

}  // namespace bgcrodr::kernels
