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

#include "bgcrodr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "bgcrodr/block_hessenberg.hpp"
#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"
#include "bgcrodr/random.hpp"

namespace bgcrodr {

void SolverConfig::validate() const {
    if (m < 1) throw std::invalid_argument("solver: m must be >= 1");
    if (block_width < 1) throw std::invalid_argument("solver: block width must be >= 1");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("solver: tol must be positive");
    if (max_cycles < 1) throw std::invalid_argument("solver: max_cycles must be >= 1");
}

KrylovOperator::KrylovOperator(const CsrMatrix& a, const Ilu0Factors* precond, PrecondSide side)
    : a_(a), m_(precond), side_(side) {
    if (side_ != PrecondSide::none && !m_) throw std::invalid_argument("solver: preconditioner side set without factors");
    if (m_) require_dims(m_->n() == a.n_rows(), "solver: preconditioner dimension differs from matrix");
}

DenseBlock KrylovOperator::apply(ConstBlockView v) {
    matvecs_ += v.cols;
    switch (side_) {
        case PrecondSide::right: return spmm(a_, apply_precond(*m_, v));
        case PrecondSide::left: return apply_precond(*m_, spmm(a_, v));
        case PrecondSide::none: break;
    }
    return spmm(a_, v);
}

DenseBlock KrylovOperator::to_solution(ConstBlockView dz) const {
    return side_ == PrecondSide::right ? apply_precond(*m_, dz) : DenseBlock(dz);
}

DenseBlock KrylovOperator::rhs(ConstBlockView b) const {
    return side_ == PrecondSide::left ? apply_precond(*m_, b) : DenseBlock(b);
}

DenseBlock KrylovOperator::residual(ConstBlockView b, ConstBlockView x, DenseBlock& true_res) {
    matvecs_ += x.cols;
    true_res = subtract(b, spmm(a_, x));
    return side_ == PrecondSide::left ? apply_precond(*m_, true_res) : true_res;
}

BlockOperator KrylovOperator::as_block_operator() {
    return [this](ConstBlockView v) { return apply(v); };
}

DenseBlock enlarge_block(ConstBlockView r0, std::size_t width, std::uint64_t seed) {
    require_dims(r0.cols == 1, "enlarge_block: expects a single column");
    require_dims(width >= 1, "enlarge_block: width must be >= 1");
    DenseBlock out(r0.rows, width);
    copy_into(r0, out.columns(0, 1));
    Rng rng(seed);
    for (std::size_t j = 1; j < width; ++j)
        for (auto& v : out.col(j)) v = uniform01(rng);
    return out;
}

namespace {

std::vector<double> column_norms(ConstBlockView r) {
    std::vector<double> out(r.cols);
    for (std::size_t j = 0; j < r.cols; ++j) out[j] = norm2(r.col(j));
    return out;
}

void add_into(BlockView y, ConstBlockView d) {
    for (std::size_t j = 0; j < y.cols; ++j)
        for (std::size_t i = 0; i < y.rows; ++i) y(i, j) += d(i, j);
}

struct RunOutput {
    DenseBlock x;
    SolveReport report;
    RecycleSpace recycle;
    ArnoldiFactorization last;
};

RunOutput run(const CsrMatrix& a, ConstBlockView b, ConstBlockView x0, const SolverConfig& cfg,
              const Ilu0Factors* precond, const RecycleSpace* rs_in, bool recycling) {
    cfg.validate();
    require_dims(a.n_rows() == a.n_cols(), "solver: matrix must be square");
    require_dims(b.rows == a.n_rows() && b.cols >= 1, "solver: right-hand side shape");
    require_dims(x0.rows == b.rows && x0.cols == b.cols, "solver: initial guess shape");
    const auto n = b.rows;
    const auto p = b.cols;
    const auto width = p > 1 ? p : cfg.block_width;
    const bool enlarged = p == 1 && width > 1;
    require_dims(width <= n, "solver: block width exceeds dimension");

    KrylovOperator op(a, precond, cfg.precond_side);
    const BlockOperator bop = op.as_block_operator();

    RunOutput out;
    auto& rep = out.report;
    auto& rs = out.recycle;
    rs = RecycleSpace{DenseBlock(n, 0), DenseBlock(n, 0), RecycleOrigin::fresh};
    DenseBlock x(x0);

    const DenseBlock bh = op.rhs(b);
    rep.rhs_norms = column_norms(bh);
    const double bfro = frobenius_norm(bh);
    auto met = [&](const std::vector<double>& norms) {
        if (cfg.stop_rule == StopRule::per_column_relative) {
            for (std::size_t j = 0; j < p; ++j)
                if (!(norms[j] <= cfg.tol * rep.rhs_norms[j])) return false;
            return true;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < p; ++j) s += norms[j] * norms[j];
        return std::sqrt(s) <= cfg.tol * bfro;
    };

    DenseBlock tres;
    DenseBlock r = op.residual(b, x, tres);

    if (recycling && rs_in && rs_in->k() > 0) {
        require_dims(rs_in->n() == n, "solver: recycle space dimension differs from matrix");
        rs = prepare_cross_system(*rs_in, bop, &rep.notes);
    }
    // X += U C^T R, R -= C C^T R.
    auto project = [&]() {
        if (rs.k() == 0) return;
        const DenseBlock ctr = matmul_tn(rs.c, r);
        add_into(x.view(), op.to_solution(matmul(rs.u, ctr)));
        kernels::gemm_nn(-1.0, rs.c, ctr, r.view());
    };
    project();

    bool converged = met(column_norms(r));
    std::size_t cycle = 0;
    while (!converged && cycle < cfg.max_cycles) {
        // A no-op in exact arithmetic; removes drift after residual replacement.
        if (cycle > 0) project();
        const DenseBlock r_start(r);
        const bool have_rs = rs.k() > 0;
        const ConstBlockView c = have_rs ? rs.c.cview() : ConstBlockView{nullptr, n, 0, n};

        DenseBlock start = enlarged ? enlarge_block(r, width, cfg.seed + cycle) : DenseBlock(r);
        if (enlarged && have_rs) {
            auto aux = start.columns(1, width - 1);
            for (int pass = 0; pass < 2; ++pass) {
                const DenseBlock coef = matmul_tn(c, aux);
                kernels::gemm_nn(-1.0, c, coef, aux);
            }
        }

        ArnoldiFactorization fact =
            arnoldi_start(start, cfg.m, c, cfg.rank_tol, cfg.seed ^ (0x5851f42d4c957f2dULL * (cycle + 1)));
        BlockHessenbergLsq lsq(width, fact.z_bar, cfg.m);
        CycleRecord rec;
        // W_m cannot outgrow the complement of range(C).
        const auto steps = std::max<std::size_t>(1, std::min(cfg.m, (n - rs.k()) / width));
        if (steps < cfg.m)
            rep.notes.push_back("cycle " + std::to_string(cycle + 1) + ": steps limited to " + std::to_string(steps) +
                                " by the problem dimension");
        for (std::size_t j = 0; j < steps; ++j) {
            arnoldi_step(fact, bop, c, cfg.ortho);
            const auto& res = lsq.add_block_column(fact.block_column(j));
            rec.step_residuals.push_back(res);
            if (cfg.early_exit && met(res)) break;
        }
        rec.block_steps = fact.m;
        const DenseBlock yfull = lsq.solve();
        const DenseBlock y(yfull.view().sub(0, 0, yfull.rows(), p));

        // X += W_m Y - U F_m Y,  R -= W_{m+1} Hbar_m Y
        DenseBlock dz = matmul(fact.basis(fact.m), y);
        if (have_rs) kernels::gemm_nn(-1.0, rs.u, matmul(fact.projection(), y), dz.view());
        add_into(x.view(), op.to_solution(dz));
        kernels::gemm_nn(-1.0, fact.basis(fact.m + 1), matmul(fact.hessenberg(), y), r.view());
        rec.estimated = column_norms(r);

        if (cfg.observer) cfg.observer(CycleObservation{cycle, r_start, r, fact, have_rs ? &rs : nullptr, y});

        if (cfg.residual_replace) {
            r = op.residual(b, x, tres);
        } else {
            tres = subtract(b, spmm(a, x));
        }
        rec.true_residual = column_norms(tres);
        rep.breakdown_events.insert(rep.breakdown_events.end(), fact.breakdowns.begin(), fact.breakdowns.end());
        rep.block_steps += fact.m;
        ++cycle;
        converged = met(column_norms(r));

        if (recycling && cfg.k > 0) {
            const auto avail = rs.k() + fact.m * width;
            auto k_target = cfg.k;
            if (k_target > avail) {
                rep.notes.push_back("cycle " + std::to_string(cycle) + ": recycle dimension clamped to " +
                                    std::to_string(avail));
                k_target = avail;
            }
            try {
                if (have_rs) {
                    const auto d = unit_column_scaling(rs.u);
                    const auto sel = harmonic_ritz_augmented(fact, rs, d, k_target);
                    rs = update_recycle_space(fact, &rs, sel, d, &rep.notes);
                } else {
                    const auto sel = harmonic_ritz_krylov(fact, k_target);
                    rs = update_recycle_space(fact, nullptr, sel, {}, &rep.notes);
                }
            } catch (const SingularError& e) {
                rep.notes.push_back("cycle " + std::to_string(cycle) + ": recycle space kept: " + e.what());
            } catch (const ConvergenceError& e) {
                rep.notes.push_back("cycle " + std::to_string(cycle) + ": recycle space kept: " + e.what());
            }
        }
        rec.recycle_dim = rs.k();
        rec.matvecs = op.matvecs();
        rep.history.push_back(std::move(rec));
        out.last = std::move(fact);
    }

    rep.cycles = cycle;
    rep.converged = converged;
    rep.matvec_count = op.matvecs();
    rep.recycle_origin = rs.origin;
    rep.final_residual = column_norms(subtract(b, spmm(a, x)));
    out.x = std::move(x);
    return out;
}

}  // namespace

GmresResult solve_block_gmres(const CsrMatrix& a, ConstBlockView b, ConstBlockView x0, const SolverConfig& cfg,
                              const Ilu0Factors* precond) {
    auto out = run(a, b, x0, cfg, precond, nullptr, false);
    return {std::move(out.x), std::move(out.report), std::move(out.last)};
}

GcrodrResult solve_block_gcrodr(const CsrMatrix& a, ConstBlockView b, ConstBlockView x0, const SolverConfig& cfg,
                                const Ilu0Factors* precond, const RecycleSpace* rs_in) {
    auto out = run(a, b, x0, cfg, precond, rs_in, true);
    return {std::move(out.x), std::move(out.report), std::move(out.recycle)};
}

SequenceResult solve_sequence(const std::vector<LinearSystem>& systems, const SolverConfig& cfg,
                              const RecycleSpace* rs_in) {
    require_dims(!systems.empty(), "solve_sequence: no systems");
    SequenceResult res;
    std::optional<RecycleSpace> held;
    if (rs_in) held = *rs_in;
    for (std::size_t i = 0; i < systems.size(); ++i) {
        const auto& sys = systems[i];
        try {
            std::optional<Ilu0Factors> f;
            if (cfg.precond_side != PrecondSide::none) f = ilu0(sys.a);
            const DenseBlock x0(sys.b.rows(), sys.b.cols());
            auto r = solve_block_gcrodr(sys.a, sys.b, x0, cfg, f ? &*f : nullptr, held ? &*held : nullptr);
            if (r.recycle.k() > 0) held = std::move(r.recycle);
            res.total_matvecs += r.report.matvec_count;
            res.reports.push_back(std::move(r.report));
            res.solutions.push_back(std::move(r.x));
        } catch (const std::exception& e) {
            SolveReport failed;
            failed.notes.push_back("system " + std::to_string(i) + " failed: " + e.what());
            res.reports.push_back(std::move(failed));
            res.solutions.emplace_back();
        }
    }
    if (held) res.recycle = std::move(*held);
    return res;
}

}  // namespace bgcrodr
