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

// Serial reference kernels against their OpenMP versions.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>

#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/kernels.hpp"
#include "bgcrodr/random.hpp"

using namespace bgcrodr;

namespace {

double best_of(std::size_t reps, const std::function<void()>& fn) {
    fn();
    double best = 1e300;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel timing"};
    std::size_t n = 1000000, band = 5, reps = 20, dim_c = 50;
    std::vector<std::size_t> widths{1, 4, 8, 16};
    int threads = kernels::max_threads();
    app.add_option("--n", n)->capture_default_str();
    app.add_option("--band", band)->capture_default_str();
    app.add_option("--reps", reps)->capture_default_str();
    app.add_option("--dim-c", dim_c)->capture_default_str();
    app.add_option("--block-sizes", widths)->delimiter(',');
    app.add_option("--threads", threads)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    kernels::set_threads(threads);
    const auto a = gen_banded(n, band, 1);
    const auto c = random_block(n, dim_c, 2, -1, 1);
    std::printf("n=%zu nnz=%zu threads=%d\n", n, a.nnz(), threads);
    std::printf("%-8s %4s %12s %12s %8s\n", "kernel", "L", "serial_s", "omp_s", "speedup");
    for (auto l : widths) {
        const auto x = random_block(n, l, 3, -1, 1);
        DenseBlock y(n, l), coef(dim_c, l);
        auto row = [&](const char* name, const std::function<void()>& s, const std::function<void()>& o) {
            const double ts = best_of(reps, s), to = best_of(reps, o);
            std::printf("%-8s %4zu %12.4e %12.4e %8.2f\n", name, l, ts, to, ts / to);
        };
        row("spmm", [&] { kernels::serial::spmm(a, x, y.view()); }, [&] { kernels::omp::spmm(a, x, y.view()); });
        row("gemm_tn", [&] { kernels::serial::gemm_tn(c, x, coef.view()); },
            [&] { kernels::omp::gemm_tn(c, x, coef.view()); });
        row("gemm_nn", [&] { kernels::serial::gemm_nn(-1.0, c, coef, y.view()); },
            [&] { kernels::omp::gemm_nn(-1.0, c, coef, y.view()); });
    }
    return 0;
}
