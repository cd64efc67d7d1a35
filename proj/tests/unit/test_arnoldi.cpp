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

#include "bgcrodr/arnoldi.hpp"
#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/dense_kernels.hpp"
#include "bgcrodr/random.hpp"
#include "oracles.hpp"

using namespace bgcrodr;

namespace {

BlockOperator op_of(const CsrMatrix& a) {
    return [&a](ConstBlockView v) { return spmm(a, v); };
}

DenseBlock orthonormal_random(std::size_t n, std::size_t k, std::uint64_t seed) {
    return reduced_qr(random_block(n, k, seed, -1, 1)).q;
}

struct Residuals {
    double relation, ortho, c_ortho, f_err;
};

Residuals check(const CsrMatrix& a, const ArnoldiFactorization& s, const DenseBlock& c) {
    const auto wm = s.basis(s.m);
    DenseBlock aw = spmm(a, wm);
    DenseBlock f_true(c.cols(), wm.cols);
    if (c.cols()) {
        f_true = matmul_tn(c, aw);
        aw = subtract(aw, matmul(c, f_true));
    }
    const auto rel = subtract(aw, matmul(s.basis(s.m + 1), s.hessenberg()));
    Residuals r{};
    r.relation = frobenius_norm(rel);
    r.ortho = orthogonality_error(s.basis(s.m + 1));
    r.c_ortho = c.cols() ? frobenius_norm(matmul_tn(c, s.basis(s.m + 1))) : 0.0;
    r.f_err = c.cols() ? frobenius_norm(subtract(f_true, s.projection())) : 0.0;
    return r;
}

}  // namespace

TEST_CASE("start: orthonormal block and scalar start") {
    auto r0 = orthonormal_random(10, 2, 1);
    auto s = arnoldi_start(r0, 3);
    CHECK(frobenius_norm(subtract(s.basis(1), r0)) < 1e-14);
    CHECK(std::abs(s.z_bar(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.z_bar(1, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(s.z_bar(0, 1)) < 1e-14);

    DenseBlock e(5, 1);
    e(0, 0) = 2.0;
    auto t = arnoldi_start(e, 2);
    CHECK(t.z_bar(0, 0) == 2.0);
    CHECK(t.breakdowns.empty());

    CHECK_THROWS_AS(arnoldi_start(DenseBlock(5, 2), 2), ZeroStartBlock);
}

TEST_CASE("start: rank-one block is completed with a random direction") {
    auto v = random_block(12, 1, 3, -1, 1);
    DenseBlock r0(12, 2);
    for (std::size_t i = 0; i < 12; ++i) r0(i, 0) = r0(i, 1) = v(i, 0);
    auto s = arnoldi_start(r0, 2, {}, 1e-12, 99);
    REQUIRE(s.breakdowns.size() == 1);
    CHECK(s.breakdowns[0].step == 0);
    CHECK(s.breakdowns[0].column == 1);
    CHECK(orthogonality_error(s.basis(1)) < 1e-13);
    CHECK(frobenius_norm(subtract(matmul(s.basis(1), s.z_bar), r0)) < 1e-13);
    auto s2 = arnoldi_start(r0, 2, {}, 1e-12, 99);
    CHECK(s2.w == s.w);
}

TEST_CASE("step on the identity breaks down immediately") {
    auto a = CsrMatrix::identity(6);
    DenseBlock e(6, 1);
    e(0, 0) = 1.0;
    auto s = arnoldi_start(e, 2);
    arnoldi_step(s, op_of(a), {}, Ortho::mgs);
    CHECK(s.hessenberg()(0, 0) == doctest::Approx(1.0));
    CHECK(s.hessenberg()(1, 0) == 0.0);
    CHECK(s.breakdowns.size() == 1);
    CHECK(orthogonality_error(s.basis(2)) < 1e-13);
}

TEST_CASE("Arnoldi relation, orthogonality and F without and with recycling") {
    const std::size_t n = 30;
    auto a = gen_random_sparse(n, 0.3, 5, 2.0);
    for (auto ortho : {Ortho::mgs, Ortho::cgs2}) {
        auto r0 = random_block(n, 2, 6, -1, 1);
        auto s = arnoldi_start(r0, 5);
        for (int j = 0; j < 5; ++j) arnoldi_step(s, op_of(a), {}, ortho);
        auto res = check(a, s, DenseBlock(n, 0));
        CHECK(res.relation <= 1e-10 * a.frobenius_norm() * frobenius_norm(s.basis(5)));
        CHECK(res.ortho <= 1e-10 * 12);

        auto c = orthonormal_random(n, 3, 7);
        auto rc = random_block(n, 2, 8, -1, 1);
        rc = subtract(rc, matmul(c, matmul_tn(c, rc)));
        auto t = arnoldi_start(rc, 5, c);
        for (int j = 0; j < 5; ++j) arnoldi_step(t, op_of(a), c, ortho);
        auto rr = check(a, t, c);
        CHECK(rr.relation <= 1e-10 * a.frobenius_norm() * frobenius_norm(t.basis(5)));
        CHECK(rr.ortho <= 1e-10 * 12);
        CHECK(rr.c_ortho <= 1e-10);
        CHECK(rr.f_err <= 1e-10);
    }
}

TEST_CASE("block Hessenberg structure") {
    auto a = gen_random_sparse(40, 0.2, 9, 1.0);
    auto s = arnoldi_start(random_block(40, 3, 1, -1, 1), 6);
    for (int j = 0; j < 6; ++j) arnoldi_step(s, op_of(a));
    const auto h = s.hessenberg();
    for (std::size_t j = 0; j < h.cols; ++j) {
        const std::size_t bj = j / 3;
        for (std::size_t i = (bj + 2) * 3; i < h.rows; ++i) CHECK(h(i, j) == 0.0);
    }
    for (std::size_t b = 0; b < 6; ++b)
        for (std::size_t c = 0; c < 3; ++c) {
            const auto row = (b + 1) * 3 + c;
            CHECK(h(row, b * 3 + c) >= 0.0);
            for (std::size_t cc = 0; cc < c; ++cc) CHECK(h(row, b * 3 + cc) == 0.0);
        }
}

TEST_CASE("MGS and CGS2 span the same space") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto a = gen_random_sparse(100, 0.05, seed, 3.0);
        auto r0 = random_block(100, 2, seed + 10, -1, 1);
        auto s1 = arnoldi_start(r0, 6);
        auto s2 = arnoldi_start(r0, 6);
        for (int j = 0; j < 6; ++j) {
            arnoldi_step(s1, op_of(a), {}, Ortho::mgs);
            arnoldi_step(s2, op_of(a), {}, Ortho::cgs2);
        }
        CHECK(oracle::max_principal_angle(oracle::to_eigen(s1.basis(7)), oracle::to_eigen(s2.basis(7))) <= 1e-8);
    }
}

TEST_CASE("capacity is enforced") {
    auto a = CsrMatrix::identity(4);
    auto s = arnoldi_start(random_block(4, 1, 1), 1);
    arnoldi_step(s, op_of(a));
    CHECK_THROWS_AS(arnoldi_step(s, op_of(a)), std::invalid_argument);
}
