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

#include <filesystem>
#include <iosfwd>

#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/dense_block.hpp"

namespace bgcrodr {

/// Reads a Matrix Market coordinate file (real or integer; general, symmetric
/// or skew-symmetric). Symmetric entries are mirrored, duplicates summed.
/// Throws ParseError naming the offending line.
CsrMatrix read_matrix_market(const std::filesystem::path& path);
CsrMatrix read_matrix_market(std::istream& in);

/// Reads a dense right-hand-side block: array format, or coordinate format
/// expanded to dense.
DenseBlock read_matrix_market_dense(const std::filesystem::path& path);
DenseBlock read_matrix_market_dense(std::istream& in);

/// Writes "coordinate real general" with 17 significant digits so that a
/// read-back reproduces every stored value exactly.
void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path);
void write_matrix_market(const CsrMatrix& a, std::ostream& out);
void write_matrix_market_dense(ConstBlockView b, std::ostream& out);

}  // namespace bgcrodr
