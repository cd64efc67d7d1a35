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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bgcrodr/arnoldi.hpp"
#include "bgcrodr/csr_matrix.hpp"
#include "bgcrodr/dense_block.hpp"
#include "bgcrodr/ilu0.hpp"
#include "bgcrodr/recycling.hpp"

namespace bgcrodr {

enum class StopRule { frobenius, per_column_relative };
enum class PrecondSide { none, right, left };

struct CycleObservation;

struct SolverConfig {
    std::size_t m = 40;           // block steps per cycle
    std::size_t k = 10;           // recycle dimension target
    std::size_t block_width = 1;  // L for a single right-hand side; p otherwise
    double tol = 1e-8;            // relative to ||B||
    std::size_t max_cycles = 100;
    Ortho ortho = Ortho::cgs2;
    StopRule stop_rule = StopRule::frobenius;
    PrecondSide precond_side = PrecondSide::right;
    std::uint64_t seed = 0;
    bool residual_replace = true;
    /// Stop inside a cycle once the least-squares residual meets tol.
    bool early_exit = true;
    double rank_tol = 1e-12;
    /// Called after every cycle, before the recycle space is refreshed.
    std::function<void(const CycleObservation&)> observer;

    void validate() const;
};

struct CycleRecord {
    std::size_t block_steps = 0;
    /// Least-squares residual of every basis column after each block step.
    std::vector<std::vector<double>> step_residuals;
    /// Per tracked column after the cycle: recurrence residual and true
    /// ||b - A x|| of the unpreconditioned system.
    std::vector<double> estimated;
    std::vector<double> true_residual;
    std::size_t recycle_dim = 0;
    std::size_t matvecs = 0;  // cumulative at the end of the cycle
};

struct SolveReport {
    std::vector<CycleRecord> history;
    std::size_t matvec_count = 0;
    std::size_t cycles = 0;
    std::size_t block_steps = 0;
    std::vector<BreakdownEvent> breakdown_events;
    EventLog notes;
    RecycleOrigin recycle_origin = RecycleOrigin::fresh;
    bool converged = false;
    /// ||b_j|| of the (left-preconditioned) system, per tracked column.
    std::vector<double> rhs_norms;
    /// True residual norms of the unpreconditioned system at exit.
    std::vector<double> final_residual;
};

struct CycleObservation {
    std::size_t cycle;
    ConstBlockView r_start;  // residual entering the cycle, orthogonal to C
    ConstBlockView r_end;    // recurrence residual after the update
    const ArnoldiFactorization& fact;
    const RecycleSpace* recycle;  // space used during the cycle, null if none
    ConstBlockView y;
};

/// The operator seen by the Krylov iteration. Right preconditioning solves
/// A M^{-1} z = b and maps corrections back through M^{-1}; left solves
/// M^{-1} A x = M^{-1} b. Every application of A to a column is counted.
class KrylovOperator {
public:
    KrylovOperator(const CsrMatrix& a, const Ilu0Factors* precond, PrecondSide side);

    DenseBlock apply(ConstBlockView v);
    /// Correction in iteration space -> correction of x.
    DenseBlock to_solution(ConstBlockView dz) const;
    /// Right-hand side of the iterated system.
    DenseBlock rhs(ConstBlockView b) const;
    /// Residual of the iterated system at x; stores b - A x in `true_res`.
    DenseBlock residual(ConstBlockView b, ConstBlockView x, DenseBlock& true_res);
    BlockOperator as_block_operator();

    std::size_t matvecs() const noexcept { return matvecs_; }
    void add_matvecs(std::size_t n) noexcept { matvecs_ += n; }

private:
    const CsrMatrix& a_;
    const Ilu0Factors* m_;
    PrecondSide side_;
    std::size_t matvecs_ = 0;
};

struct GmresResult {
    DenseBlock x;
    SolveReport report;
    ArnoldiFactorization fact;
};

struct GcrodrResult {
    DenseBlock x;
    SolveReport report;
    RecycleSpace recycle;
};

/// Restarted block GMRES. cfg.k is ignored. Returns the factorization of the
/// last cycle.
GmresResult solve_block_gmres(const CsrMatrix& a, ConstBlockView b, ConstBlockView x0, const SolverConfig& cfg,
                              const Ilu0Factors* precond = nullptr);

/// Block GCRO-DR. With `rs_in` the space is first re-prepared against the
/// current operator; without it the first cycle is plain block GMRES whose
/// harmonic Ritz vectors seed the recycle space.
GcrodrResult solve_block_gcrodr(const CsrMatrix& a, ConstBlockView b, ConstBlockView x0, const SolverConfig& cfg,
                                const Ilu0Factors* precond = nullptr, const RecycleSpace* rs_in = nullptr);

/// r0 followed by L - 1 seeded uniform(0,1) columns.
DenseBlock enlarge_block(ConstBlockView r0, std::size_t width, std::uint64_t seed);

struct LinearSystem {
    CsrMatrix a;
    DenseBlock b;
};

struct SequenceResult {
    std::vector<SolveReport> reports;
    std::vector<DenseBlock> solutions;
    std::size_t total_matvecs = 0;
    RecycleSpace recycle;
};

/// Solves the systems in order from zero initial guesses, threading the
/// recycle space from each solve into the next. ILU(0) is rebuilt per system
/// unless cfg.precond_side is none. A failing system is recorded and skipped.
SequenceResult solve_sequence(const std::vector<LinearSystem>& systems, const SolverConfig& cfg,
                              const RecycleSpace* rs_in = nullptr);

}  // namespace bgcrodr
