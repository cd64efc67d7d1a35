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

#include "bgcrodr/ilu0.hpp"

#include <vector>

#include "bgcrodr/errors.hpp"

namespace bgcrodr {

Ilu0Factors ilu0(const CsrMatrix& a) {
    require_dims(a.n_rows() == a.n_cols(), "ilu0: matrix must be square");
    const auto n = a.n_rows();
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    std::vector<double> lu(a.values().begin(), a.values().end());
    std::vector<index_t> diag(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        for (index_t k = rp[i]; k < rp[i + 1]; ++k)
            if (static_cast<std::size_t>(ci[k]) == i) diag[i] = k;

    // Position of each column of the current row, -1 when off-pattern.
    std::vector<index_t> where(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (diag[i] < 0) throw SingularError("ilu0: missing diagonal entry", i);
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) where[ci[k]] = k;
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            const auto col = static_cast<std::size_t>(ci[k]);
            if (col >= i) break;
            const double pivot = lu[diag[col]];
            lu[k] /= pivot;
            const double lik = lu[k];
            for (index_t kk = diag[col] + 1; kk < rp[col + 1]; ++kk) {
                const auto pos = where[ci[kk]];
                if (pos >= 0) lu[pos] -= lik * lu[kk];
            }
        }
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) where[ci[k]] = -1;
        if (lu[diag[i]] == 0.0) throw SingularError("ilu0: zero pivot", i);
    }

    std::vector<index_t> lrp(n + 1, 0), urp(n + 1, 0), lci, uci;
    std::vector<double> lv, uv;
    for (std::size_t i = 0; i < n; ++i) {
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            if (k < diag[i]) {
                lci.push_back(ci[k]);
                lv.push_back(lu[k]);
            } else {
                uci.push_back(ci[k]);
                uv.push_back(lu[k]);
            }
        }
        lrp[i + 1] = static_cast<index_t>(lci.size());
        urp[i + 1] = static_cast<index_t>(uci.size());
    }
    return {CsrMatrix(n, n, std::move(lrp), std::move(lci), std::move(lv)),
            CsrMatrix(n, n, std::move(urp), std::move(uci), std::move(uv))};
}

DenseBlock apply_precond(const Ilu0Factors& f, ConstBlockView x) {
    const auto n = f.n();
    require_dims(x.rows == n, "apply_precond: dimension mismatch");
    const auto q = x.cols;
    DenseBlock y(x);
    std::vector<double> acc(q);

    const auto lrp = f.lower.row_ptr();
    const auto lci = f.lower.col_idx();
    const auto lv = f.lower.values();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < q; ++c) acc[c] = y(i, c);
        for (index_t k = lrp[i]; k < lrp[i + 1]; ++k)
            for (std::size_t c = 0; c < q; ++c) acc[c] -= lv[k] * y(lci[k], c);
        for (std::size_t c = 0; c < q; ++c) y(i, c) = acc[c];
    }

    const auto urp = f.upper.row_ptr();
    const auto uci = f.upper.col_idx();
    const auto uv = f.upper.values();
    for (std::size_t i = n; i-- > 0;) {
        // Diagonal is the first stored entry of each upper row.
        const index_t d = urp[i];
        for (std::size_t c = 0; c < q; ++c) acc[c] = y(i, c);
        for (index_t k = d + 1; k < urp[i + 1]; ++k)
            for (std::size_t c = 0; c < q; ++c) acc[c] -= uv[k] * y(uci[k], c);
        for (std::size_t c = 0; c < q; ++c) y(i, c) = acc[c] / uv[d];
    }
    return y;
}

}  // namespace bgcrodr
