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

#include "bgcrodr/block_hessenberg.hpp"

#include <cmath>

#include "bgcrodr/dense_kernels.hpp"
#include "bgcrodr/errors.hpp"

namespace bgcrodr {

namespace {

// Q^T of the Householder QR of a (2L x L) window, rows sign-normalized so
// that the triangular factor has a nonnegative diagonal.
DenseBlock window_reflector(ConstBlockView window) {
    const auto rows = window.rows;
    const auto l = window.cols;
    DenseBlock work(window);
    DenseBlock qt = DenseBlock::identity(rows);
    for (std::size_t c = 0; c < l; ++c) {
        auto x = work.col(c).subspan(c);
        const double alpha = x[0];
        const double sigma = norm2(x.subspan(1));
        if (sigma == 0.0) continue;
        const double beta = -std::copysign(std::hypot(alpha, sigma), alpha);
        const double tau = (beta - alpha) / beta;
        std::vector<double> v(x.begin(), x.end());
        v[0] = 1.0;
        for (std::size_t i = 1; i < v.size(); ++i) v[i] /= (alpha - beta);
        auto apply = [&](BlockView y) {
            for (std::size_t k = 0; k < y.cols; ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * y(c + i, k);
                s *= tau;
                for (std::size_t i = 0; i < v.size(); ++i) y(c + i, k) -= s * v[i];
            }
        };
        apply(work.view().columns(c, l - c));
        apply(qt.view());
    }
    for (std::size_t c = 0; c < l; ++c)
        if (work(c, c) < 0.0)
            for (std::size_t k = 0; k < rows; ++k) qt(c, k) = -qt(c, k);
    return qt;
}

}  // namespace

BlockHessenbergLsq::BlockHessenbergLsq(std::size_t block_width, ConstBlockView rhs_top, std::size_t max_blocks)
    : width_(block_width), max_blocks_(max_blocks), r_(max_blocks * block_width, max_blocks * block_width),
      rhs_((max_blocks + 1) * block_width, rhs_top.cols), residuals_(rhs_top.cols, 0.0) {
    require_dims(block_width >= 1, "BlockHessenbergLsq: block width must be positive");
    require_dims(rhs_top.rows == block_width, "BlockHessenbergLsq: rhs must have L rows");
    copy_into(rhs_top, rhs_.view().sub(0, 0, block_width, rhs_top.cols));
    for (std::size_t c = 0; c < rhs_top.cols; ++c) residuals_[c] = norm2(rhs_top.col(c));
    reflectors_.reserve(max_blocks);
}

const std::vector<double>& BlockHessenbergLsq::add_block_column(ConstBlockView new_block) {
    const auto l = width_;
    const auto j = reflectors_.size();
    require_dims(j < max_blocks_, "BlockHessenbergLsq: capacity exhausted");
    require_dims(new_block.rows == (j + 2) * l && new_block.cols == l,
                 "BlockHessenbergLsq: new block column must be (j+2)L x L");

    DenseBlock col(new_block);
    for (const auto& set : reflectors_) {
        auto window = col.view().sub(set.row_offset, 0, 2 * l, l);
        const auto updated = matmul(set.qt, window);
        copy_into(updated, window);
    }

    BlockReflectorSet set;
    set.row_offset = j * l;
    const auto window = col.view().sub(set.row_offset, 0, 2 * l, l);
    set.qt = window_reflector(window);
    const auto tri = matmul(set.qt, window);

    for (std::size_t c = 0; c < l; ++c) {
        const auto rc = j * l + c;
        for (std::size_t i = 0; i < j * l; ++i) r_(i, rc) = col(i, c);
        for (std::size_t i = 0; i <= c; ++i) r_(j * l + i, rc) = tri(i, c);
    }

    auto rhs_window = rhs_.view().sub(set.row_offset, 0, 2 * l, rhs_.cols());
    const auto rhs_updated = matmul(set.qt, rhs_window);
    copy_into(rhs_updated, rhs_window);
    reflectors_.push_back(std::move(set));

    for (std::size_t c = 0; c < rhs_.cols(); ++c) {
        double s = 0.0;
        for (std::size_t i = (j + 1) * l; i < (j + 2) * l; ++i) s += rhs_(i, c) * rhs_(i, c);
        residuals_[c] = std::sqrt(s);
    }
    return residuals_;
}

double BlockHessenbergLsq::residual_frobenius() const {
    double s = 0.0;
    for (double r : residuals_) s += r * r;
    return std::sqrt(s);
}

ConstBlockView BlockHessenbergLsq::r_factor() const {
    const auto k = blocks() * width_;
    return r_.view().sub(0, 0, k, k);
}

ConstBlockView BlockHessenbergLsq::transformed_rhs() const {
    return rhs_.view().sub(0, 0, (blocks() + 1) * width_, rhs_.cols());
}

DenseBlock BlockHessenbergLsq::solve() const {
    const auto k = blocks() * width_;
    return solve_triangular(r_factor(), rhs_.view().sub(0, 0, k, rhs_.cols()));
}

}  // namespace bgcrodr
