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

#include <numeric>

#include "bgcrodr/errors.hpp"
#include "bgcrodr/random.hpp"
#include "bgcrodr/solver.hpp"
#include "oracles.hpp"
#include "problems.hpp"

using namespace bgcrodr;

namespace {

CsrMatrix dense_random(std::size_t n, std::uint64_t seed, double shift) {
    auto d = random_block(n, n, seed, -1, 1);
    for (std::size_t i = 0; i < n; ++i) d(i, i) += shift;
    return CsrMatrix::from_dense(d);
}

SolverConfig plain(std::size_t m, std::size_t k = 0) {
    SolverConfig cfg;
    cfg.m = m;
    cfg.k = k;
    cfg.precond_side = PrecondSide::none;
    cfg.tol = 1e-10;
    return cfg;
}

double true_residual(const CsrMatrix& a, const DenseBlock& b, const DenseBlock& x) {
    return frobenius_norm(subtract(b, spmm(a, x)));
}

}  // namespace

TEST_CASE("config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.m = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.tol = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.block_width = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    auto a = CsrMatrix::identity(4);
    CHECK_THROWS_AS(solve_block_gmres(a, DenseBlock(4, 1), DenseBlock(4, 1), SolverConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(solve_block_gmres(a, DenseBlock(3, 1), DenseBlock(3, 1), plain(2)), DimensionError);
}

TEST_CASE("identity converges in one block step") {
    auto a = CsrMatrix::identity(10);
    auto b = random_block(10, 2, 1, -1, 1);
    auto r = solve_block_gmres(a, b, DenseBlock(10, 2), plain(5));
    CHECK(r.report.converged);
    CHECK(r.report.block_steps == 1);
    CHECK(frobenius_norm(subtract(r.x, b)) < 1e-14);
    CHECK(r.report.matvec_count == 2 + 2 + 2);  // initial residual, one step, replacement
}

TEST_CASE("zero right-hand side is converged on entry") {
    auto a = dense_random(10, 1, 4.0);
    auto r = solve_block_gcrodr(a, DenseBlock(10, 1), DenseBlock(10, 1), plain(5, 2));
    CHECK(r.report.converged);
    CHECK(r.report.cycles == 0);
}

TEST_CASE("block GMRES reaches a tight tolerance") {
    const std::size_t n = 30;
    auto a = dense_random(n, 3, 6.0);
    auto b = random_block(n, 2, 4, -1, 1);
    auto cfg = plain(8);
    cfg.max_cycles = 50;
    auto r = solve_block_gmres(a, b, DenseBlock(n, 2), cfg);
    CHECK(r.report.converged);
    CHECK(true_residual(a, b, r.x) <= 1e-10 * frobenius_norm(b));
    CHECK(r.fact.m >= 1);
}

TEST_CASE("block residual is no larger than single-vector residual") {
    std::vector<double> d(20);
    std::iota(d.begin(), d.end(), 1.0);
    auto a = CsrMatrix::diagonal(d);
    auto b = random_block(20, 2, 7, -1, 1);
    auto cfg = plain(10);
    cfg.max_cycles = 1;
    cfg.early_exit = false;
    auto blk = solve_block_gmres(a, b, DenseBlock(20, 2), cfg);
    for (std::size_t c = 0; c < 2; ++c) {
        DenseBlock bc(b.columns(c, 1));
        auto single = solve_block_gmres(a, bc, DenseBlock(20, 1), cfg);
        const auto& hb = blk.report.history[0].step_residuals;
        const auto& hs = single.report.history[0].step_residuals;
        for (std::size_t s = 0; s < std::min(hb.size(), hs.size()); ++s) CHECK(hb[s][c] <= hs[s][0] + 1e-12);
    }
}

TEST_CASE("per-column residuals are nonincreasing within a cycle") {
    auto a = dense_random(40, 9, 3.0);
    auto b = random_block(40, 3, 10, -1, 1);
    auto cfg = plain(12, 5);
    cfg.max_cycles = 4;
    auto r = solve_block_gcrodr(a, b, DenseBlock(40, 3), cfg);
    for (const auto& cyc : r.report.history)
        for (std::size_t s = 1; s < cyc.step_residuals.size(); ++s)
            for (std::size_t c = 0; c < 3; ++c) CHECK(cyc.step_residuals[s][c] <= cyc.step_residuals[s - 1][c] * (1 + 1e-12));
}

TEST_CASE("estimated and true residuals agree") {
    const std::size_t n = 40;
    auto a = dense_random(n, 11, 6.0);
    auto b = random_block(n, 2, 12, -1, 1);
    auto cfg = plain(6, 4);
    cfg.max_cycles = 30;
    auto r = solve_block_gcrodr(a, b, DenseBlock(n, 2), cfg);
    CHECK(r.report.converged);
    const double bn = frobenius_norm(b);
    for (const auto& cyc : r.report.history)
        for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(cyc.estimated[c] - cyc.true_residual[c]) <= 1e-8 * bn);
    double fin = 0;
    for (auto v : r.report.final_residual) fin += v * v;
    CHECK(std::abs(std::sqrt(fin) - true_residual(a, b, r.x)) <= 1e-10 * bn);
    CHECK(true_residual(a, b, r.x) <= 1e-10 * bn);
}

TEST_CASE("cycle residual equals block GMRES on the projected operator") {
    const std::size_t n = 40;
    auto a = dense_random(n, 13, 2.0);
    auto b = random_block(n, 2, 14, -1, 1);
    auto cfg = plain(4, 6);
    cfg.max_cycles = 6;
    cfg.early_exit = false;
    const auto ae = oracle::to_eigen(a);
    int checked = 0;
    cfg.observer = [&](const CycleObservation& o) {
        oracle::MatrixXd op = ae;
        if (o.recycle) {
            const auto c = oracle::to_eigen(o.recycle->c);
            op = ae - c * (c.transpose() * ae);
        }
        const auto ref = oracle::gmres_residuals(op, oracle::to_eigen(o.r_start), static_cast<int>(o.fact.m));
        const double scale = frobenius_norm(o.r_start);
        for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(norm2(o.r_end.col(c)) - ref[c]) <= 1e-10 * scale);
        ++checked;
    };
    solve_block_gcrodr(a, b, DenseBlock(n, 2), cfg);
    CHECK(checked == 6);
}

TEST_CASE("residual is orthogonal to the image of the search space") {
    const std::size_t n = 45;
    auto a = dense_random(n, 15, 2.0);
    auto b = random_block(n, 2, 16, -1, 1);
    auto cfg = plain(3, 5);
    cfg.max_cycles = 4;
    cfg.early_exit = false;
    cfg.observer = [&](const CycleObservation& o) {
        const double rn = frobenius_norm(o.r_end);
        if (o.recycle) CHECK(frobenius_norm(matmul_tn(o.recycle->c, o.r_end)) <= 1e-8 * rn);
        const auto img = matmul(o.fact.basis(o.fact.m + 1), o.fact.hessenberg());
        CHECK(frobenius_norm(matmul_tn(img, o.r_end)) <= 1e-8 * rn * frobenius_norm(img));
    };
    solve_block_gcrodr(a, b, DenseBlock(n, 2), cfg);
}

TEST_CASE("recycle space spanning everything converges at the initial projection") {
    const std::size_t n = 8;
    auto a = dense_random(n, 17, 3.0);
    RecycleSpace rs{DenseBlock::identity(n), DenseBlock(n, n), RecycleOrigin::fresh};
    auto b = random_block(n, 1, 18, -1, 1);
    auto r = solve_block_gcrodr(a, b, DenseBlock(n, 1), plain(4, n), nullptr, &rs);
    CHECK(r.report.converged);
    CHECK(r.report.block_steps == 0);
    CHECK(true_residual(a, b, r.x) <= 1e-10 * frobenius_norm(b));
}

TEST_CASE("exact eigenvector recycling deflates the spectrum") {
    const std::size_t n = 20, k = 4;
    auto d = random_block(n, n, 19, -1, 1);
    DenseBlock s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = d(i, j) + d(j, i) + (i == j ? 6.0 : 0.0);
    auto a = CsrMatrix::from_dense(s);
    Eigen::SelfAdjointEigenSolver<oracle::MatrixXd> es(oracle::to_eigen(a));
    RecycleSpace rs{oracle::from_eigen(es.eigenvectors().leftCols(k)), DenseBlock(n, k), RecycleOrigin::fresh};
    auto b = random_block(n, 1, 20, -1, 1);
    auto cfg = plain(n - k, k);
    cfg.max_cycles = 1;
    auto r = solve_block_gcrodr(a, b, DenseBlock(n, 1), cfg, nullptr, &rs);
    CHECK(r.report.converged);
    CHECK(r.report.block_steps <= n - k);
    CHECK(r.report.recycle_origin == RecycleOrigin::end_of_cycle);
}

TEST_CASE("enlarge_block") {
    auto r0 = random_block(9, 1, 1, -1, 1);
    CHECK(enlarge_block(r0, 1, 5) == r0);
    auto e = enlarge_block(r0, 3, 5);
    CHECK(e.cols() == 3);
    CHECK(DenseBlock(e.columns(0, 1)) == r0);
    CHECK(e == enlarge_block(r0, 3, 5));
    CHECK_FALSE(e == enlarge_block(r0, 3, 6));
    for (std::size_t j = 1; j < 3; ++j)
        for (auto v : e.col(j)) CHECK((v >= 0.0 && v < 1.0));
    CHECK_THROWS_AS(enlarge_block(e, 2, 1), DimensionError);
}

TEST_CASE("single right-hand side with an enlarged block") {
    const std::size_t n = 60;
    auto a = gen_random_sparse(n, 0.1, 21, 3.0);
    auto b = random_block(n, 1, 22, -1, 1);
    auto cfg = plain(8, 5);
    cfg.block_width = 3;
    cfg.max_cycles = 40;
    auto r = solve_block_gcrodr(a, b, DenseBlock(n, 1), cfg);
    CHECK(r.report.converged);
    CHECK(r.x.cols() == 1);
    CHECK(true_residual(a, b, r.x) <= 1e-10 * frobenius_norm(b) * 1.01);
    CHECK(r.report.history[0].step_residuals[0].size() == 3);
}

TEST_CASE("preconditioning sides") {
    auto a = problems::grid_operator(8, 8, 2, 2, 0.6, 3);
    const auto n = a.n_rows();
    auto f = ilu0(a);
    auto b = random_block(n, 2, 23, -1, 1);
    std::size_t mv[3];
    int idx = 0;
    for (auto side : {PrecondSide::none, PrecondSide::right, PrecondSide::left}) {
        auto cfg = plain(20, 8);
        cfg.tol = 1e-8;
        cfg.max_cycles = 200;
        cfg.precond_side = side;
        auto r = solve_block_gcrodr(a, b, DenseBlock(n, 2), cfg, side == PrecondSide::none ? nullptr : &f);
        CHECK(r.report.converged);
        if (side != PrecondSide::left) CHECK(true_residual(a, b, r.x) <= 1e-8 * frobenius_norm(b) * 1.01);
        mv[idx++] = r.report.matvec_count;
    }
    CHECK(mv[1] < mv[0]);
}

TEST_CASE("per-column stop rule") {
    const std::size_t n = 50;
    auto a = dense_random(n, 25, 6.0);
    auto b = random_block(n, 2, 26, -1, 1);
    for (std::size_t i = 0; i < n; ++i) b(i, 1) *= 1e-4;
    auto cfg = plain(6, 4);
    cfg.tol = 1e-8;
    cfg.stop_rule = StopRule::per_column_relative;
    cfg.max_cycles = 60;
    auto r = solve_block_gcrodr(a, b, DenseBlock(n, 2), cfg);
    CHECK(r.report.converged);
    for (std::size_t c = 0; c < 2; ++c) {
        DenseBlock bc(b.columns(c, 1)), xc(r.x.columns(c, 1));
        CHECK(true_residual(a, bc, xc) <= 1e-8 * frobenius_norm(bc) * 1.01);
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
    auto a = dense_random(50, 27, 0.0);
    auto b = random_block(50, 1, 28, -1, 1);
    auto cfg = plain(2, 1);
    cfg.max_cycles = 2;
    auto r = solve_block_gcrodr(a, b, DenseBlock(50, 1), cfg);
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.cycles == 2);
}

TEST_CASE("residual replacement off") {
    const std::size_t n = 40;
    auto a = dense_random(n, 29, 6.0);
    auto b = random_block(n, 2, 30, -1, 1);
    auto cfg = plain(6, 4);
    cfg.residual_replace = false;
    cfg.max_cycles = 30;
    auto r = solve_block_gcrodr(a, b, DenseBlock(n, 2), cfg);
    CHECK(r.report.converged);
    CHECK(true_residual(a, b, r.x) <= 1e-9 * frobenius_norm(b));
}

TEST_CASE("sequences: repeated systems reuse the recycle space") {
    auto a = problems::grid_operator(10, 10, 2, 1, 0.5, 7);
    const auto n = a.n_rows();
    auto b = random_block(n, 1, 31, -1, 1);
    auto cfg = plain(30, 20);
    cfg.tol = 1e-8;
    cfg.precond_side = PrecondSide::right;
    cfg.max_cycles = 100;
    auto seq = solve_sequence({{a, b}, {a, b}}, cfg);
    REQUIRE(seq.reports.size() == 2);
    CHECK(seq.reports[0].converged);
    CHECK(seq.reports[1].converged);
    CHECK(seq.reports[1].matvec_count < seq.reports[0].matvec_count);
    CHECK(seq.reports[1].recycle_origin != RecycleOrigin::fresh);
    CHECK(seq.total_matvecs == seq.reports[0].matvec_count + seq.reports[1].matvec_count);

    auto one = solve_sequence({{a, b}}, cfg);
    auto f = ilu0(a);
    auto direct = solve_block_gcrodr(a, b, DenseBlock(n, 1), cfg, &f);
    CHECK(one.solutions[0] == direct.x);
    CHECK(one.reports[0].matvec_count == direct.report.matvec_count);
}

TEST_CASE("sequences: perturbed systems") {
    auto a = problems::grid_operator(12, 12, 2, 2, 0.6, 9);
    const auto n = a.n_rows();
    const auto d = problems::random_diagonal(n, 33);
    auto b = random_block(n, 1, 34, -1, 1);
    std::vector<LinearSystem> systems;
    for (int i = 1; i <= 7; ++i) {
        std::vector<double> di(n);
        for (std::size_t j = 0; j < n; ++j) di[j] = 1e-3 * i * d[j];
        systems.push_back({add_diagonal(a, di), b});
    }
    auto cfg = plain(30, 15);
    cfg.tol = 1e-8;
    cfg.max_cycles = 100;
    auto seq = solve_sequence(systems, cfg);
    for (const auto& r : seq.reports) CHECK(r.converged);
    for (std::size_t i = 1; i < 7; ++i) CHECK(seq.reports[i].matvec_count < seq.reports[0].matvec_count);
}

TEST_CASE("sequences: a failing system is recorded and skipped") {
    auto good = dense_random(12, 35, 4.0);
    auto bad = CsrMatrix::from_triplets(12, 12, {{0, 0, 1.0}});
    auto b = random_block(12, 1, 36, -1, 1);
    auto cfg = plain(6, 3);
    cfg.precond_side = PrecondSide::right;
    auto seq = solve_sequence({{good, b}, {bad, b}, {good, b}}, cfg);
    CHECK(seq.reports[0].converged);
    CHECK_FALSE(seq.reports[1].converged);
    CHECK_FALSE(seq.reports[1].notes.empty());
    CHECK(seq.reports[2].converged);
}
