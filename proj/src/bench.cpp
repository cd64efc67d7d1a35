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

#include "bgcrodr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bgcrodr/dense_kernels.hpp"
#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"
#include "bgcrodr/random.hpp"

namespace bgcrodr {

const char* to_string(BenchMode m) { return m == BenchMode::all_at_once ? "all-at-once" : "one-at-a-time"; }

std::vector<std::size_t> default_block_sizes() {
    std::vector<std::size_t> out{1};
    for (std::size_t l = 2; l <= 20; l += 2) out.push_back(l);
    return out;
}

double matvec_bytes(std::size_t n, std::size_t nnz, std::size_t l) {
    return 12.0 * static_cast<double>(nnz) + 4.0 * static_cast<double>(n + 1) + 16.0 * static_cast<double>(l * n);
}

double projector_bytes(std::size_t n, std::size_t dim_c, std::size_t l, Ortho ortho) {
    if (dim_c == 0) return 0.0;
    const double nd = static_cast<double>(n), kd = static_cast<double>(dim_c), ld = static_cast<double>(l);
    if (ortho == Ortho::mgs) return kd * (16.0 * nd + 24.0 * ld * nd);
    return 2.0 * (16.0 * nd * kd + 24.0 * ld * nd);
}

namespace {

struct Stats {
    double mean, min, stddev;
};

Stats summarize(const std::vector<double>& t) {
    double sum = 0.0;
    for (double s : t) sum += s;
    const double mean = sum / static_cast<double>(t.size());
    double var = 0.0;
    for (double s : t) var += (s - mean) * (s - mean);
    const double sd = t.size() > 1 ? std::sqrt(var / static_cast<double>(t.size() - 1)) : 0.0;
    return {mean, *std::min_element(t.begin(), t.end()), sd};
}

// Reps of the two variants alternate so slow drift in machine load hits both.
template <class F, class G>
std::pair<Stats, Stats> time_pair(F&& a, G&& b, bool both, std::size_t reps, bool warmup) {
    using clock = std::chrono::steady_clock;
    if (warmup) {
        a();
        if (both) b();
    }
    std::vector<double> ta(reps), tb(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        auto t0 = clock::now();
        a();
        ta[r] = std::chrono::duration<double>(clock::now() - t0).count();
        if (!both) continue;
        t0 = clock::now();
        b();
        tb[r] = std::chrono::duration<double>(clock::now() - t0).count();
    }
    const Stats sa = summarize(ta);
    return {sa, both ? summarize(tb) : sa};
}

void project_mgs(ConstBlockView c, BlockView w, DenseBlock& coef) {
    for (std::size_t i = 0; i < c.cols; ++i) {
        const auto ci = c.sub(0, i, c.rows, 1);
        auto row = coef.view().sub(0, 0, 1, w.cols);
        kernels::gemm_tn(ci, w, row);
        kernels::gemm_nn(-1.0, ci, row, w);
    }
}

void project_cgs2(ConstBlockView c, BlockView w, DenseBlock& coef) {
    auto y = coef.view().sub(0, 0, c.cols, w.cols);
    for (int pass = 0; pass < 2; ++pass) {
        kernels::gemm_tn(c, w, y);
        kernels::gemm_nn(-1.0, c, y, w);
    }
}

std::vector<BenchResult> sweep(const CsrMatrix& a, const std::vector<std::size_t>& block_sizes, const BenchOptions& opt,
                               const DenseBlock* c, Ortho ortho) {
    require_dims(!block_sizes.empty(), "bench: no block sizes");
    if (opt.reps < 1) throw std::invalid_argument("bench: reps must be >= 1");
    require_dims(a.n_rows() == a.n_cols(), "bench: matrix must be square");
    const auto n = a.n_rows();
    const std::size_t dim_c = c ? c->cols() : 0;
    std::vector<BenchResult> out;
    for (auto l : block_sizes) {
        require_dims(l >= 1, "bench: block size must be >= 1");
        const DenseBlock x = random_block(n, l, opt.seed + l, -1.0, 1.0);
        DenseBlock y(n, l);
        DenseBlock coef(std::max<std::size_t>(dim_c, 1), l);

        auto apply = [&](ConstBlockView in, BlockView outv) {
            kernels::spmm(a, in, outv);
            if (!c || dim_c == 0) return;
            if (ortho == Ortho::mgs) project_mgs(c->cview(), outv, coef);
            else project_cgs2(c->cview(), outv, coef);
        };
        const auto [blk, one] = time_pair([&] { apply(x.cview(), y.view()); },
                                          [&] {
                                              for (std::size_t j = 0; j < l; ++j)
                                                  apply(x.columns(j, 1), y.columns(j, 1));
                                          },
                                          l > 1, opt.reps, opt.warmup);

        const double per_block = matvec_bytes(n, a.nnz(), l) + (c ? projector_bytes(n, dim_c, l, ortho) : 0.0);
        const double per_single = matvec_bytes(n, a.nnz(), 1) + (c ? projector_bytes(n, dim_c, 1, ortho) : 0.0);
        BenchResult r;
        r.matrix_id = opt.matrix_id;
        r.n = n;
        r.nnz = a.nnz();
        r.block_size = l;
        r.projector = c ? "icct" : "none";
        r.dim_c = dim_c;
        r.ortho = c ? (ortho == Ortho::mgs ? "mgs" : "cgs2") : "none";
        r.reps = opt.reps;
        r.mode = BenchMode::all_at_once;
        r.mean_seconds = blk.mean;
        r.min_seconds = blk.min;
        r.stddev_seconds = blk.stddev;
        r.bytes_model = per_block;
        out.push_back(r);
        r.mode = BenchMode::one_at_a_time;
        r.mean_seconds = one.mean;
        r.min_seconds = one.min;
        r.stddev_seconds = one.stddev;
        r.bytes_model = static_cast<double>(l) * per_single;
        out.push_back(r);
    }
    return out;
}

std::string series_of(const BenchResult& r) {
    if (r.projector == "none") return r.matrix_id;
    return r.matrix_id + " " + r.ortho + " dim_c=" + std::to_string(r.dim_c);
}

}  // namespace

std::vector<BenchResult> bench_matvec(const CsrMatrix& a, const std::vector<std::size_t>& block_sizes,
                                      const BenchOptions& opt) {
    return sweep(a, block_sizes, opt, nullptr, Ortho::cgs2);
}

std::vector<BenchResult> bench_projected(const CsrMatrix& a, const std::vector<std::size_t>& dim_cs,
                                         const std::vector<std::size_t>& block_sizes, Ortho ortho,
                                         const BenchOptions& opt) {
    require_dims(!dim_cs.empty(), "bench: no projector dimensions");
    std::vector<BenchResult> out;
    for (auto k : dim_cs) {
        require_dims(k <= a.n_rows(), "bench: dim_c exceeds n");
        DenseBlock c = random_block(a.n_rows(), k, opt.seed ^ 0x9e3779b97f4a7c15ULL, -1.0, 1.0);
        if (k > 0) c = reduced_qr(c).q;
        auto part = sweep(a, block_sizes, opt, &c, ortho);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<BenchRatio> block_ratios(const std::vector<BenchResult>& results) {
    std::map<std::pair<std::string, std::size_t>, std::pair<const BenchResult*, const BenchResult*>> pairs;
    std::vector<std::pair<std::string, std::size_t>> order;
    for (const auto& r : results) {
        const auto key = std::make_pair(series_of(r), r.block_size);
        auto [it, fresh] = pairs.try_emplace(key);
        if (fresh) order.push_back(key);
        (r.mode == BenchMode::all_at_once ? it->second.first : it->second.second) = &r;
    }
    std::vector<BenchRatio> out;
    for (const auto& key : order) {
        const auto [blk, one] = pairs[key];
        if (!blk || !one) continue;
        const double l = static_cast<double>(key.second);
        out.push_back({key.first, key.second, blk->mean_seconds / (one->mean_seconds / l),
                       blk->bytes_model / one->bytes_model});
    }
    return out;
}

static const char* kCsvHeader = "matrix_id,n,nnz,L,mode,projector,dim_c,ortho,reps,mean_s,min_s,stddev_s,bytes_model";

void emit_csv(const std::vector<BenchResult>& results, std::ostream& out) {
    out << kCsvHeader << '\n';
    char buf[256];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, ",%zu,%zu,%zu,%s,%s,%zu,%s,%zu,%.6e,%.6e,%.6e,%.6e", r.n, r.nnz, r.block_size,
                      to_string(r.mode), r.projector.c_str(), r.dim_c, r.ortho.c_str(), r.reps, r.mean_seconds,
                      r.min_seconds, r.stddev_seconds, r.bytes_model);
        out << r.matrix_id << buf << '\n';
    }
}

void emit_csv(const std::vector<BenchResult>& results, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    emit_csv(results, f);
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<BenchResult> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("bench csv: unexpected header", 1);
    std::vector<BenchResult> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 13) throw ParseError("bench csv: expected 13 fields", lineno);
        try {
            BenchResult r;
            r.matrix_id = f[0];
            r.n = std::stoull(f[1]);
            r.nnz = std::stoull(f[2]);
            r.block_size = std::stoull(f[3]);
            if (f[4] == "all-at-once") r.mode = BenchMode::all_at_once;
            else if (f[4] == "one-at-a-time") r.mode = BenchMode::one_at_a_time;
            else throw ParseError("bench csv: bad mode '" + f[4] + "'", lineno);
            r.projector = f[5];
            r.dim_c = std::stoull(f[6]);
            r.ortho = f[7];
            r.reps = std::stoull(f[8]);
            r.mean_seconds = std::stod(f[9]);
            r.min_seconds = std::stod(f[10]);
            r.stddev_seconds = std::stod(f[11]);
            r.bytes_model = std::stod(f[12]);
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw ParseError("bench csv: bad number", lineno);
        }
    }
    return out;
}

void emit_plot(const std::vector<BenchResult>& results, std::ostream& out) {
    const auto ratios = block_ratios(results);
    std::vector<std::string> series;
    double lmax = 1.0, rmax = 1.0;
    for (const auto& r : ratios) {
        if (std::find(series.begin(), series.end(), r.series) == series.end()) series.push_back(r.series);
        lmax = std::max(lmax, static_cast<double>(r.block_size));
        rmax = std::max(rmax, r.time_ratio);
    }
    const double w = 640, h = 400, pad = 50;
    auto px = [&](double l) { return pad + (w - 2 * pad) * (l - 1.0) / std::max(1.0, lmax - 1.0); };
    auto py = [&](double v) { return h - pad - (h - 2 * pad) * v / rmax; };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n";
    std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", pad, h - pad,
                  w - pad, h - pad);
    out << buf;
    std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", pad, pad, pad,
                  h - pad);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\">L</text>\n", w / 2, h - 12);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"8\" y=\"%g\">t(block)/t(single), max %.3g</text>\n", pad - 16, rmax);
    out << buf;
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::string pts;
        for (const auto& r : ratios) {
            if (r.series != series[s]) continue;
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(static_cast<double>(r.block_size)), py(r.time_ratio));
            pts += buf;
        }
        if (!pts.empty()) pts.pop_back();
        const char* col = colors[s % (sizeof colors / sizeof *colors)];
        out << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"" << pts << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" fill=\"%s\">", w - pad - 150, pad + 16.0 * s, col);
        out << buf << series[s] << "</text>\n";
    }
    out << "</svg>\n";
}

void emit_plot(const std::vector<BenchResult>& results, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    emit_plot(results, f);
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace bgcrodr
