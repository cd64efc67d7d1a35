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

#include "bgcrodr/arnoldi.hpp"

#include <cmath>
#include <utility>

#include "bgcrodr/dense_kernels.hpp"
#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"
#include "bgcrodr/random.hpp"

namespace bgcrodr {

namespace {

// Two classical passes of v against the orthonormal columns of `q`.
void project_out(ConstBlockView q, std::span<double> v) {
    if (q.cols == 0) return;
    BlockView vv{v.data(), v.size(), 1, v.size()};
    DenseBlock coef(q.cols, 1);
    for (int pass = 0; pass < 2; ++pass) {
        kernels::gemm_tn(q, vv, coef.view());
        kernels::gemm_nn(-1.0, q, coef, vv);
    }
}

struct ClosingQr {
    DenseBlock q;
    DenseBlock r;
    std::vector<std::pair<std::size_t, double>> replaced;  // (column, discarded norm)
};

// Reduced QR of `block`, whose columns are already orthogonal to `c` and
// `prior`. When a diagonal falls below rank_tol * ref_norm the column-wise
// path replaces that direction with a random vector orthonormal to
// everything generated so far; R keeps a zero diagonal there.
ClosingQr close_block(ConstBlockView block, ConstBlockView c, ConstBlockView prior, double ref_norm, double rank_tol,
                      Rng& rng) {
    const auto l = block.cols;
    const double tol = rank_tol * ref_norm;
    auto qr = reduced_qr(block, 0.0);
    bool deficient = false;
    for (std::size_t j = 0; j < l; ++j) deficient = deficient || !(qr.r_factor(j, j) > tol);
    if (!deficient) return {std::move(qr.q), std::move(qr.r_factor), {}};

    ClosingQr out{DenseBlock(block.rows, l), DenseBlock(l, l), {}};
    for (std::size_t j = 0; j < l; ++j) {
        auto v = out.q.col(j);
        std::copy(block.col(j).begin(), block.col(j).end(), v.begin());
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                const double r = dot(out.q.col(i), v);
                out.r(i, j) += r;
                for (std::size_t t = 0; t < v.size(); ++t) v[t] -= r * out.q(t, i);
            }
        const double nv = norm2(v);
        if (nv > tol) {
            out.r(j, j) = nv;
            for (auto& x : v) x /= nv;
            continue;
        }
        out.replaced.emplace_back(j, nv);
        out.r(j, j) = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (auto& x : v) x = uniform01(rng) - 0.5;
            project_out(c, v);
            project_out(prior, v);
            project_out(out.q.columns(0, j), v);
            const double nr = norm2(v);
            if (nr > 1e-8) {
                for (auto& x : v) x /= nr;
                break;
            }
        }
    }
    return out;
}

}  // namespace

ArnoldiFactorization arnoldi_start(ConstBlockView r0, std::size_t capacity, ConstBlockView c, double rank_tol,
                                   std::uint64_t seed) {
    require_dims(r0.cols >= 1 && r0.rows >= r0.cols, "arnoldi_start: need n >= L >= 1");
    require_dims(c.cols == 0 || c.rows == r0.rows, "arnoldi_start: recycle basis row count differs");
    const auto n = r0.rows;
    const auto l = r0.cols;
    const double ref = frobenius_norm(r0);
    if (ref == 0.0) throw ZeroStartBlock();

    ArnoldiFactorization s;
    s.block_width = l;
    s.capacity = capacity;
    s.rank_tol = rank_tol;
    s.seed = seed;
    s.w = DenseBlock(n, (capacity + 1) * l);
    s.h_bar = DenseBlock((capacity + 1) * l, capacity * l);
    s.f = DenseBlock(c.cols, capacity * l);

    Rng rng(seed);
    auto closed = close_block(r0, c, ConstBlockView{nullptr, n, 0, n}, ref, rank_tol, rng);
    copy_into(closed.q, s.w.columns(0, l));
    s.z_bar = std::move(closed.r);
    for (auto [j, d] : closed.replaced) s.breakdowns.push_back({0, j, d});
    return s;
}

void arnoldi_step(ArnoldiFactorization& s, const BlockOperator& op, ConstBlockView c, Ortho ortho) {
    require_dims(s.m < s.capacity, "arnoldi_step: capacity exhausted");
    require_dims(c.cols == s.f.rows(), "arnoldi_step: recycle dimension differs from factorization");
    const auto l = s.block_width;
    const auto m = s.m;
    const auto n = s.n();

    DenseBlock vhat = op(s.w.columns(m * l, l));
    require_dims(vhat.rows() == n && vhat.cols() == l, "arnoldi_step: operator returned wrong shape");
    const double ref = frobenius_norm(vhat);

    const auto basis = s.basis(m + 1);
    auto hcol = s.h_bar.view().sub(0, m * l, (m + 1) * l, l);
    auto fcol = s.f.view().sub(0, m * l, s.f.rows(), l);

    if (ortho == Ortho::cgs2) {
        DenseBlock fc(c.cols, l), hc(basis.cols, l);
        for (int pass = 0; pass < 2; ++pass) {
            if (c.cols) {
                kernels::gemm_tn(c, vhat, fc.view());
                kernels::gemm_nn(-1.0, c, fc, vhat.view());
                for (std::size_t j = 0; j < l; ++j)
                    for (std::size_t i = 0; i < c.cols; ++i) fcol(i, j) += fc(i, j);
            }
            kernels::gemm_tn(basis, vhat, hc.view());
            kernels::gemm_nn(-1.0, basis, hc, vhat.view());
            for (std::size_t j = 0; j < l; ++j)
                for (std::size_t i = 0; i < basis.cols; ++i) hcol(i, j) += hc(i, j);
        }
    } else {
        DenseBlock row(1, l);
        for (std::size_t i = 0; i < c.cols; ++i) {
            const auto ci = c.columns(i, 1);
            kernels::gemm_tn(ci, vhat, row.view());
            kernels::gemm_nn(-1.0, ci, row, vhat.view());
            for (std::size_t j = 0; j < l; ++j) fcol(i, j) = row(0, j);
        }
        DenseBlock hij(l, l);
        for (std::size_t i = 0; i <= m; ++i) {
            const auto vi = s.w.columns(i * l, l);
            kernels::gemm_tn(vi, vhat, hij.view());
            kernels::gemm_nn(-1.0, vi, hij, vhat.view());
            copy_into(hij, hcol.sub(i * l, 0, l, l));
        }
    }

    Rng rng(s.seed + 0x9e3779b97f4a7c15ULL * (m + 1));
    auto closed = close_block(vhat, c, basis, ref, s.rank_tol, rng);
    copy_into(closed.q, s.w.columns((m + 1) * l, l));
    copy_into(closed.r, s.h_bar.view().sub((m + 1) * l, m * l, l, l));
    for (auto [j, d] : closed.replaced) s.breakdowns.push_back({m + 1, j, d});
    s.m = m + 1;
}

}  // namespace bgcrodr
