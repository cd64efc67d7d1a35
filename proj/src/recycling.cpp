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

#include "bgcrodr/recycling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"

namespace bgcrodr {

namespace {

constexpr char kMagic[8] = {'B', 'G', 'C', 'R', 'D', 'R', 'R', 'S'};
constexpr std::uint32_t kVersion = 1;
constexpr double kCollapseTol = 1e-10;

// y = a * t, with `a` given as the two column groups [a1 a2].
DenseBlock apply_split(ConstBlockView a1, ConstBlockView a2, ConstBlockView t) {
    const auto n = a1.cols ? a1.rows : a2.rows;
    DenseBlock y(n, t.cols);
    if (a1.cols) kernels::gemm_nn(1.0, a1, t.sub(0, 0, a1.cols, t.cols), y.view());
    if (a2.cols) kernels::gemm_nn(1.0, a2, t.sub(a1.cols, 0, a2.cols, t.cols), y.view());
    return y;
}

DenseBlock keep_columns(ConstBlockView a, const std::vector<std::size_t>& cols) {
    DenseBlock out(a.rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) copy_into(a.columns(cols[j], 1), out.columns(j, 1));
    return out;
}

DenseBlock scaled_columns(ConstBlockView u, std::span<const double> d) {
    DenseBlock out(u);
    for (std::size_t j = 0; j < out.cols(); ++j)
        for (auto& x : out.col(j)) x *= d[j];
    return out;
}

// QR of g with collapse detection; returns the kept column indices. Repeats
// until the factor is well conditioned on the survivors.
std::vector<std::size_t> stable_columns(ConstBlockView g, QrFactors& qr, EventLog* log, const char* where) {
    std::vector<std::size_t> kept(g.cols);
    std::iota(kept.begin(), kept.end(), 0);
    for (;;) {
        DenseBlock sub = keep_columns(g, kept);
        qr = reduced_qr(sub, kCollapseTol);
        std::vector<std::size_t> next;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (!qr.deficient[j]) next.push_back(kept[j]);
        if (next.size() == kept.size()) return kept;
        if (log)
            log->push_back(std::string(where) + ": dropped " + std::to_string(kept.size() - next.size()) +
                           " collapsed recycle direction(s)");
        kept = std::move(next);
        if (kept.empty()) {
            qr = QrFactors{DenseBlock(g.rows, 0), DenseBlock(0, 0), 0, {}};
            return kept;
        }
    }
}

DenseBlock inverse_upper(ConstBlockView r) { return solve_triangular(r, DenseBlock::identity(r.rows)); }

}  // namespace

const char* to_string(RecycleOrigin o) {
    switch (o) {
        case RecycleOrigin::fresh: return "fresh";
        case RecycleOrigin::end_of_cycle: return "end-of-cycle";
        case RecycleOrigin::cross_system: return "cross-system";
    }
    return "unknown";
}

HarmonicRitzSelection select_smallest(EigPairs pairs, std::size_t k_target) {
    const auto count = pairs.size();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](std::size_t i) {
        const double a = std::abs(pairs.values[i]);
        return std::isfinite(a) ? a : INFINITY;
    };
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a) < key(b); });

    const auto want = std::min(k_target, count);
    std::vector<bool> taken(count, false);
    for (std::size_t i = 0; i < want; ++i) taken[order[i]] = true;
    for (std::size_t i = 0; i < count; ++i) {
        if (!taken[i]) continue;
        if (pairs.pairing[i] == PairKind::first_of_pair) taken[i + 1] = true;
        if (pairs.pairing[i] == PairKind::second_of_pair) taken[i - 1] = true;
    }

    HarmonicRitzSelection sel;
    for (std::size_t i = 0; i < count; ++i)
        if (taken[i]) sel.keep.push_back(i);
    // Pairs sit in adjacent slots with (re, im) columns, so the kept slots
    // map one-to-one onto real basis columns.
    sel.coeffs = keep_columns(pairs.vectors, sel.keep);
    sel.pairs = std::move(pairs);
    return sel;
}

HarmonicRitzSelection harmonic_ritz_krylov(const ArnoldiFactorization& fact, std::size_t k_target) {
    require_dims(fact.recycle_dim() == 0, "harmonic_ritz_krylov: factorization has a recycle space");
    const auto l = fact.block_width;
    const auto ml = fact.m * l;
    require_dims(ml > 0, "harmonic_ritz_krylov: empty factorization");
    const auto hbar = fact.hessenberg();
    DenseBlock hm(hbar.sub(0, 0, ml, ml));
    const auto last = hbar.sub(ml, ml - l, l, l);

    DenseBlock rhs(ml, l);
    copy_into(matmul_tn(last, last), rhs.view().sub(ml - l, 0, l, l));
    // solve_dense only detects exact zero pivots; a near-singular H_m is
    // caught by the triangular check below through an explicit QR.
    auto qr = reduced_qr(hm, 0.0);
    for (std::size_t i = 0; i < ml; ++i)
        if (!(qr.r_factor(i, i) > 1e-14 * frobenius_norm(hm))) throw SingularError("harmonic_ritz_krylov: H_m singular", i);
    DenseBlock corr = solve_dense(hm, rhs, true);
    for (std::size_t j = 0; j < l; ++j)
        for (std::size_t i = 0; i < ml; ++i) hm(i, ml - l + j) += corr(i, j);
    return select_smallest(eig_standard(hm), k_target);
}

std::vector<double> unit_column_scaling(ConstBlockView u) {
    std::vector<double> d(u.cols);
    for (std::size_t j = 0; j < u.cols; ++j) {
        const double nj = norm2(u.col(j));
        d[j] = nj > 0.0 ? 1.0 / nj : 1.0;
    }
    return d;
}

DenseBlock augmented_hessenberg(const ArnoldiFactorization& fact, std::span<const double> d_scale) {
    const auto k = fact.recycle_dim();
    require_dims(d_scale.size() == k, "augmented_hessenberg: scaling length differs from k");
    const auto l = fact.block_width;
    const auto ml = fact.m * l;
    DenseBlock g(k + ml + l, k + ml);
    for (std::size_t i = 0; i < k; ++i) g(i, i) = d_scale[i];
    copy_into(fact.projection(), g.view().sub(0, k, k, ml));
    copy_into(fact.hessenberg(), g.view().sub(k, k, ml + l, ml));
    return g;
}

HarmonicRitzSelection harmonic_ritz_augmented(const ArnoldiFactorization& fact, const RecycleSpace& rs,
                                              std::span<const double> d_scale, std::size_t k_target) {
    const auto k = rs.k();
    require_dims(fact.recycle_dim() == k, "harmonic_ritz_augmented: recycle dimension mismatch");
    const auto l = fact.block_width;
    const auto ml = fact.m * l;
    const DenseBlock g = augmented_hessenberg(fact, d_scale);

    DenseBlock cross(k + ml + l, k + ml);
    if (k) {
        const DenseBlock ut = scaled_columns(rs.u, d_scale);
        copy_into(matmul_tn(rs.c, ut), cross.view().sub(0, 0, k, k));
        copy_into(matmul_tn(fact.basis(fact.m + 1), ut), cross.view().sub(k, 0, ml + l, k));
    }
    for (std::size_t i = 0; i < ml; ++i) cross(k + i, k + i) = 1.0;

    const DenseBlock ag = matmul_tn(g, g);
    const DenseBlock bg = matmul_tn(g, cross);
    return select_smallest(eig_generalized(ag, bg), k_target);
}

RecycleSpace update_recycle_space(const ArnoldiFactorization& fact, const RecycleSpace* rs,
                                  const HarmonicRitzSelection& selection, std::span<const double> d_scale,
                                  EventLog* log) {
    const auto k = rs ? rs->k() : 0;
    const auto ml = fact.m * fact.block_width;
    const auto& t = selection.coeffs;
    require_dims(t.rows() == k + ml, "update_recycle_space: coefficient rows differ from basis size");

    DenseBlock g = rs ? augmented_hessenberg(fact, d_scale) : DenseBlock(fact.hessenberg());
    const DenseBlock gt = matmul(g, t);

    QrFactors qr;
    const auto kept = stable_columns(gt, qr, log, "update_recycle_space");
    const DenseBlock tk = keep_columns(t, kept);
    const DenseBlock tr = matmul(tk, inverse_upper(qr.r_factor));

    DenseBlock ut;
    if (k) ut = scaled_columns(rs->u, d_scale);
    const ConstBlockView uhat = k ? ut.cview() : ConstBlockView{nullptr, fact.n(), 0, fact.n()};
    const ConstBlockView chat = k ? rs->c.cview() : ConstBlockView{nullptr, fact.n(), 0, fact.n()};

    RecycleSpace out;
    out.u = apply_split(uhat, fact.basis(fact.m), tr);
    out.c = apply_split(chat, fact.basis(fact.m + 1), qr.q);
    out.origin = RecycleOrigin::end_of_cycle;
    return out;
}

RecycleSpace prepare_cross_system(const RecycleSpace& rs, const BlockOperator& op_new, EventLog* log) {
    if (rs.k() == 0) return RecycleSpace{rs.u, rs.c, RecycleOrigin::cross_system};
    const DenseBlock au = op_new(rs.u);
    QrFactors qr;
    const auto kept = stable_columns(au, qr, log, "prepare_cross_system");
    RecycleSpace out;
    out.u = matmul(keep_columns(rs.u, kept), inverse_upper(qr.r_factor));
    out.c = std::move(qr.q);
    out.origin = RecycleOrigin::cross_system;
    return out;
}

void save_recycle_space(const RecycleSpace& rs, const std::filesystem::path& path) {
    static_assert(std::endian::native == std::endian::little, "recycle space files are little-endian");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const std::uint32_t version = kVersion;
    const auto origin = static_cast<std::uint32_t>(rs.origin);
    const std::uint64_t n = rs.n(), k = rs.k();
    out.write(kMagic, 8);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&origin), 4);
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&k), 8);
    out.write(reinterpret_cast<const char*>(rs.u.data()), static_cast<std::streamsize>(n * k * sizeof(double)));
    out.write(reinterpret_cast<const char*>(rs.c.data()), static_cast<std::streamsize>(n * k * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

RecycleSpace load_recycle_space(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    char magic[8];
    std::uint32_t version = 0, origin = 0;
    std::uint64_t n = 0, k = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&origin), 4);
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&k), 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ParseError("not a recycle space file: " + path.string(), 0);
    if (version != kVersion) throw ParseError("unsupported recycle space version " + std::to_string(version), 0);
    if (origin > 2) throw ParseError("bad recycle space origin tag", 0);
    if (k > n) throw ParseError("recycle space has k > n", 0);
    RecycleSpace rs{DenseBlock(n, k), DenseBlock(n, k), static_cast<RecycleOrigin>(origin)};
    in.read(reinterpret_cast<char*>(rs.u.data()), static_cast<std::streamsize>(n * k * sizeof(double)));
    in.read(reinterpret_cast<char*>(rs.c.data()), static_cast<std::streamsize>(n * k * sizeof(double)));
    if (!in) throw ParseError("truncated recycle space file: " + path.string(), 0);
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes in recycle space file", 0);
    return rs;
}

}  // namespace bgcrodr
