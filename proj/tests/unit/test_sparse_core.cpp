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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"
#include "bgcrodr/matrix_market.hpp"
#include "bgcrodr/random.hpp"
#include "oracles.hpp"

using namespace bgcrodr;

namespace {

DenseBlock triple_loop(const DenseBlock& a, const DenseBlock& x) {
    DenseBlock y(a.rows(), x.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            long double s = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * x(k, j);
            y(i, j) = static_cast<double>(s);
        }
    return y;
}

CsrMatrix parse(const std::string& text) {
    std::istringstream in(text);
    return read_matrix_market(in);
}

}  // namespace

TEST_CASE("csr constructor validates invariants") {
    CHECK_NOTHROW(CsrMatrix(2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0}));
    CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 1}, {0}, {1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, 2, {1, 1, 2}, {0, 1}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 2, 2}, {1, 1}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 1, 2}, {0, 2}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 2, 1}, {0, 1}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("from_triplets sorts and sums duplicates") {
    auto a = CsrMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 2, 4.0}});
    CHECK(a.nnz() == 3);
    CHECK(a.at(1, 2) == 5.0);
    CHECK(a.at(0, 1) == 2.0);
    CHECK(a.at(1, 0) == 3.0);
    CHECK(a.at(0, 0) == 0.0);
}

TEST_CASE("spmm small cases") {
    auto i3 = CsrMatrix::identity(3);
    DenseBlock e = DenseBlock::from_rows(3, 2, {1, 0, 0, 1, 0, 0});
    CHECK(spmm(i3, e) == e);

    const double d[] = {1, 2, 3};
    auto dg = CsrMatrix::diagonal(d);
    DenseBlock ones = DenseBlock::from_rows(3, 1, {1, 1, 1});
    CHECK(spmm(dg, ones) == DenseBlock::from_rows(3, 1, {1, 2, 3}));

    DenseBlock e3 = DenseBlock::from_rows(3, 1, {0, 0, 1});
    CHECK(spmv(dg, e3) == DenseBlock::from_rows(3, 1, {0, 0, 3}));
    DenseBlock e2 = DenseBlock::from_rows(3, 1, {0, 1, 0});
    CHECK(spmv(i3, e2) == e2);

    CHECK_THROWS_AS(spmm(dg, DenseBlock(4, 1)), DimensionError);
    CHECK_THROWS_AS(spmv(dg, DenseBlock(3, 2)), DimensionError);
}

TEST_CASE("spmm matches dense triple loop") {
    auto a = gen_random_sparse(50, 0.1, 7);
    auto x = random_block(50, 4, 11, -1, 1);
    auto y = spmm(a, x);
    auto ref = triple_loop(a.to_dense(), x);
    CHECK(frobenius_norm(subtract(y, ref)) <= 1e-13 * frobenius_norm(ref));

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::size_t n = 20 * seed;
        auto b = gen_random_sparse(n, 0.05, seed, 1.0);
        auto xb = random_block(n, 1 + seed % 7, seed + 100, -1, 1);
        auto yb = spmm(b, xb);
        auto rb = triple_loop(b.to_dense(), xb);
        CHECK(frobenius_norm(subtract(yb, rb)) <= 1e-13 * b.frobenius_norm() * frobenius_norm(xb));
    }
}

TEST_CASE("spmm column equals spmv bitwise") {
    auto a = gen_random_sparse(120, 0.08, 3);
    for (std::size_t l : {1, 2, 3, 5, 8, 13, 20, 23}) {
        auto x = random_block(120, l, 40 + l, -1, 1);
        auto y = spmm(a, x);
        for (std::size_t j = 0; j < l; ++j) CHECK(spmv(a, x.columns(j, 1)) == DenseBlock(y.columns(j, 1)));
    }
}

TEST_CASE("threaded kernels agree bitwise with serial references") {
    auto a = gen_banded(5000, 4, 9);
    for (std::size_t l : {1, 4, 7, 16, 21}) {
        auto x = random_block(5000, l, l, -1, 1);
        DenseBlock ys(5000, l), yo(5000, l);
        kernels::serial::spmm(a, x, ys.view());
        kernels::omp::spmm(a, x, yo.view());
        CHECK(ys == yo);
    }
    auto p = random_block(3000, 12, 1, -1, 1);
    auto q = random_block(3000, 5, 2, -1, 1);
    DenseBlock cs(12, 5), co(12, 5);
    kernels::serial::gemm_tn(p, q, cs.view());
    kernels::omp::gemm_tn(p, q, co.view());
    CHECK(cs == co);
    auto coef = random_block(12, 5, 3, -1, 1);
    DenseBlock ys(q), yo(q);
    kernels::serial::gemm_nn(-0.5, p, coef, ys.view());
    kernels::omp::gemm_nn(-0.5, p, coef, yo.view());
    CHECK(ys == yo);
}

TEST_CASE("gen_banded counts and determinism") {
    auto d = gen_banded(5, 0, 1);
    CHECK(d.nnz() == 5);
    auto b = gen_banded(10000, 2, 4);
    CHECK(b.nnz() == 5 * 10000 - 6);
    CHECK(b == gen_banded(10000, 2, 4));
    CHECK_FALSE(b == gen_banded(10000, 2, 5));
    CHECK(b.at(17, 17) >= 10000.0);
    CHECK_THROWS_AS(gen_banded(4, 2, 1), std::invalid_argument);
}

TEST_CASE("add_diagonal inserts missing entries") {
    auto a = CsrMatrix::from_triplets(3, 3, {{0, 1, 2.0}, {2, 2, 1.0}});
    const double d[] = {1, 1, 1};
    auto b = add_diagonal(a, d);
    CHECK(b.at(0, 0) == 1.0);
    CHECK(b.at(1, 1) == 1.0);
    CHECK(b.at(2, 2) == 2.0);
    CHECK(b.at(0, 1) == 2.0);
    CHECK(b.nnz() == 4);
}

TEST_CASE("matrix market reader") {
    auto a = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5.0\n2 2 7.0\n");
    CHECK(a.to_dense() == DenseBlock::from_rows(2, 2, {5, 0, 0, 7}));

    auto s = parse("%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 1\n2 1 3\n");
    CHECK(s.at(0, 1) == 3.0);
    CHECK(s.at(1, 0) == 3.0);
    CHECK(s.nnz() == 3);

    auto k = parse("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3\n");
    CHECK(k.at(0, 1) == -3.0);

    auto i = parse("%%MatrixMarket matrix coordinate integer general\n1 1 2\n1 1 2\n1 1 3\n");
    CHECK(i.at(0, 0) == 5.0);
}

TEST_CASE("matrix market errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("%%MatrixMarket matrix array real general\n1 1\n1\n") == 1);
    CHECK(line_of("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n") == 1);
    CHECK(line_of("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n") == 1);
    CHECK(line_of("not a banner\n") == 1);
    CHECK(line_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n") == 3);
    CHECK(line_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n") > 0);
    CHECK(line_of("%%MatrixMarket matrix coordinate real general\n2 x 2\n") == 2);
    CHECK_THROWS(read_matrix_market(std::filesystem::path("/nonexistent/file.mtx")));
}

TEST_CASE("matrix market round trip is exact") {
    auto a = gen_random_sparse(60, 0.1, 21);
    std::stringstream ss;
    write_matrix_market(a, ss);
    auto b = read_matrix_market(ss);
    CHECK(a == b);
}

TEST_CASE("dense matrix market block") {
    std::istringstream in("%%MatrixMarket matrix array real general\n3 2\n1\n2\n3\n4\n5\n6\n");
    auto b = read_matrix_market_dense(in);
    CHECK(b == DenseBlock::from_rows(3, 2, {1, 4, 2, 5, 3, 6}));
    std::stringstream out;
    write_matrix_market_dense(b, out);
    CHECK(read_matrix_market_dense(out) == b);
}

TEST_CASE("sherman5 header when available") {
    const char* env = std::getenv("SHERMAN5_MTX");
    std::filesystem::path p = env ? env : BGCRODR_DATA_DIR "/sherman5.mtx";
    if (!std::filesystem::exists(p)) return;
    auto a = read_matrix_market(p);
    CHECK(a.n_rows() == 3312);
    CHECK(a.nnz() == 20793);
}
