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

// Timing harness for block versus one-at-a-time operator application.
// Wall time plus an analytic bytes-moved model stand in for hardware
// cache counters.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bgcrodr/arnoldi.hpp"
#include "bgcrodr/csr_matrix.hpp"

namespace bgcrodr {

enum class BenchMode { all_at_once, one_at_a_time };

const char* to_string(BenchMode m);

struct BenchResult {
    std::string matrix_id;
    std::size_t n = 0;
    std::size_t nnz = 0;
    std::size_t block_size = 1;
    BenchMode mode = BenchMode::all_at_once;
    std::string projector = "none";  // "none" or "icct" when (I - C C^T) is composed
    std::size_t dim_c = 0;
    std::string ortho = "none";  // "none", "mgs" or "cgs2"
    std::size_t reps = 0;
    double mean_seconds = 0.0;
    double min_seconds = 0.0;
    double stddev_seconds = 0.0;
    double bytes_model = 0.0;
};

struct BenchOptions {
    std::size_t reps = 100;
    bool warmup = true;
    std::uint64_t seed = 0;
    std::string matrix_id = "A";
};

/// 1 and the even integers 2..20.
std::vector<std::size_t> default_block_sizes();

/// Bytes touched by one width-L CSR product: 8-byte values, 4-byte column
/// indices and row pointers, x read once and y written once.
double matvec_bytes(std::size_t n, std::size_t nnz, std::size_t l);

/// Bytes touched by (I - C C^T) applied to a width-L block after the product.
/// MGS sweeps C column by column; CGS2 runs two passes of C^T W and W -= C Y.
double projector_bytes(std::size_t n, std::size_t dim_c, std::size_t l, Ortho ortho);

/// Times spmm(A, n x L) against L separate spmv calls for every L. For L = 1
/// both rows share one measurement.
std::vector<BenchResult> bench_matvec(const CsrMatrix& a, const std::vector<std::size_t>& block_sizes,
                                      const BenchOptions& opt = {});

/// Same sweep for (I - C C^T) A with a seeded orthonormal C per dim_c.
std::vector<BenchResult> bench_projected(const CsrMatrix& a, const std::vector<std::size_t>& dim_cs,
                                         const std::vector<std::size_t>& block_sizes, Ortho ortho,
                                         const BenchOptions& opt = {});

/// mean(all-at-once, L) / (mean(one-at-a-time, L) / L), per series and L.
struct BenchRatio {
    std::string series;
    std::size_t block_size;
    double time_ratio;
    double bytes_ratio;
};
std::vector<BenchRatio> block_ratios(const std::vector<BenchResult>& results);

void emit_csv(const std::vector<BenchResult>& results, std::ostream& out);
void emit_csv(const std::vector<BenchResult>& results, const std::filesystem::path& path);
std::vector<BenchResult> parse_csv(std::istream& in);

/// SVG line plot of time ratio against L, one polyline per series.
void emit_plot(const std::vector<BenchResult>& results, std::ostream& out);
void emit_plot(const std::vector<BenchResult>& results, const std::filesystem::path& path);

}  // namespace bgcrodr
