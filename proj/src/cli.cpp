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

#include "bgcrodr/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "bgcrodr/bench.hpp"
#include "bgcrodr/errors.hpp"
#include "bgcrodr/kernels.hpp"
#include "bgcrodr/matrix_market.hpp"
#include "bgcrodr/random.hpp"
#include "bgcrodr/solver.hpp"

namespace bgcrodr {

namespace {

struct SolveOptions {
    std::string rhs;
    std::size_t rhs_random = 0;
    std::string precond = "ilu0";
    std::string report;
    std::size_t threads = 1;
    SolverConfig cfg;
};

const std::map<std::string, Ortho> kOrtho{{"mgs", Ortho::mgs}, {"cgs2", Ortho::cgs2}};
const std::map<std::string, PrecondSide> kSide{{"right", PrecondSide::right}, {"left", PrecondSide::left}};
const std::map<std::string, StopRule> kStop{{"frobenius", StopRule::frobenius},
                                            {"per-column", StopRule::per_column_relative}};

void add_solver_flags(CLI::App* sub, SolveOptions& o) {
    sub->add_option("--rhs", o.rhs, "right-hand side file (Matrix Market array)")->check(CLI::ExistingFile);
    sub->add_option("--rhs-random", o.rhs_random,
                    "number of right-hand sides; columns beyond --rhs are seeded uniform(-1,1)");
    sub->add_option("--m", o.cfg.m, "block steps per cycle")->capture_default_str();
    sub->add_option("--k", o.cfg.k, "recycle dimension")->capture_default_str();
    sub->add_option("--block-width", o.cfg.block_width, "block width for a single right-hand side")
        ->capture_default_str();
    sub->add_option("--tol", o.cfg.tol, "relative residual tolerance")->capture_default_str();
    sub->add_option("--max-cycles", o.cfg.max_cycles)->capture_default_str();
    sub->add_option("--ortho", o.cfg.ortho)->transform(CLI::CheckedTransformer(kOrtho, CLI::ignore_case));
    sub->add_option("--precond", o.precond)->check(CLI::IsMember({"ilu0", "none"}))->capture_default_str();
    sub->add_option("--precond-side", o.cfg.precond_side)->transform(CLI::CheckedTransformer(kSide, CLI::ignore_case));
    sub->add_option("--stop-rule", o.cfg.stop_rule)->transform(CLI::CheckedTransformer(kStop, CLI::ignore_case));
    sub->add_option("--seed", o.cfg.seed)->capture_default_str();
    sub->add_flag("--no-residual-replace{false}", o.cfg.residual_replace);
    sub->add_flag("--no-early-exit{false}", o.cfg.early_exit);
    sub->add_option("--report", o.report, "per-cycle history as CSV");
    sub->add_option("--threads", o.threads, "OpenMP threads for the kernels")->capture_default_str();
}

DenseBlock make_rhs(const SolveOptions& o, std::size_t n) {
    DenseBlock file(n, 0);
    if (!o.rhs.empty()) {
        file = read_matrix_market_dense(o.rhs);
        require_dims(file.rows() == n, "rhs rows differ from the matrix dimension");
    }
    const std::size_t p = std::max<std::size_t>({o.rhs_random, file.cols(), 1});
    if (file.cols() == p) return file;
    const DenseBlock extra = random_block(n, p - file.cols(), o.cfg.seed + 1, -1.0, 1.0);
    return file.cols() == 0 ? extra : hcat(file, extra);
}

void write_report(const SolveReport& rep, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "cycle,block_steps,recycle_dim,matvecs,estimated,true_residual\n";
    char buf[160];
    for (std::size_t i = 0; i < rep.history.size(); ++i) {
        const auto& c = rep.history[i];
        double e = 0, t = 0;
        for (auto v : c.estimated) e += v * v;
        for (auto v : c.true_residual) t += v * v;
        std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.6e,%.6e\n", i + 1, c.block_steps, c.recycle_dim, c.matvecs,
                      std::sqrt(e), std::sqrt(t));
        f << buf;
    }
}

void print_report(std::ostream& out, const std::string& label, const SolveReport& rep) {
    double bn = 0, rn = 0;
    for (auto v : rep.rhs_norms) bn += v * v;
    for (auto v : rep.final_residual) rn += v * v;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: %s cycles=%zu block_steps=%zu matvecs=%zu recycle=%s rel_residual=%.3e\n",
                  label.c_str(), rep.converged ? "converged" : "NOT converged", rep.cycles, rep.block_steps,
                  rep.matvec_count, to_string(rep.recycle_origin), bn > 0 ? std::sqrt(rn / bn) : std::sqrt(rn));
    out << buf;
    for (const auto& note : rep.notes) out << "  " << note << '\n';
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& s, const char* what) {
    std::size_t a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%zu,%zu%c", &a, &b, &tail) != 2) throw CLI::ValidationError(what, "expected N,M");
    return {a, b};
}

CsrMatrix load_or_generate(const std::string& matrix, const std::string& banded, std::uint64_t seed, std::string& id) {
    if (!matrix.empty()) {
        id = std::filesystem::path(matrix).stem().string();
        return read_matrix_market(matrix);
    }
    const auto [n, band] = parse_pair(banded, "--banded");
    id = "banded_" + std::to_string(n) + "_" + std::to_string(band);
    return gen_banded(n, band, seed);
}

int run_solve(const std::string& matrix, SolveOptions& o, const std::string& rs_in, const std::string& rs_out,
              std::ostream& out) {
    kernels::set_threads(static_cast<int>(o.threads));
    const auto a = read_matrix_market(matrix);
    const auto b = make_rhs(o, a.n_rows());
    if (o.precond == "none") o.cfg.precond_side = PrecondSide::none;
    std::optional<Ilu0Factors> f;
    if (o.cfg.precond_side != PrecondSide::none) f = ilu0(a);
    std::optional<RecycleSpace> in;
    if (!rs_in.empty()) in = load_recycle_space(rs_in);
    const auto res = solve_block_gcrodr(a, b, DenseBlock(b.rows(), b.cols()), o.cfg, f ? &*f : nullptr,
                                        in ? &*in : nullptr);
    print_report(out, std::filesystem::path(matrix).filename().string(), res.report);
    if (!o.report.empty()) write_report(res.report, o.report);
    if (!rs_out.empty()) save_recycle_space(res.recycle, rs_out);
    return res.report.converged ? 0 : 2;
}

int run_solve_seq(const std::vector<std::string>& matrices, const std::string& matrix, const std::string& perturb,
                  bool fresh, SolveOptions& o, std::ostream& out) {
    kernels::set_threads(static_cast<int>(o.threads));
    std::vector<LinearSystem> systems;
    std::vector<std::string> labels;
    if (!matrices.empty()) {
        for (const auto& path : matrices) {
            auto a = read_matrix_market(path);
            auto b = make_rhs(o, a.n_rows());
            systems.push_back({std::move(a), std::move(b)});
            labels.push_back(std::filesystem::path(path).filename().string());
        }
    } else {
        if (matrix.empty()) throw CLI::RequiredError("--matrix with --perturb");
        std::size_t count = 0;
        double scale = 0;
        char tail = 0;
        if (std::sscanf(perturb.c_str(), "%zu,%lf%c", &count, &scale, &tail) != 2 || count == 0)
            throw CLI::ValidationError("--perturb", "expected COUNT,SCALE");
        const auto a = read_matrix_market(matrix);
        const auto b = make_rhs(o, a.n_rows());
        Rng rng(o.cfg.seed ^ 0xd1b54a32d192ed03ULL);
        std::vector<double> d(a.n_rows());
        for (auto& v : d) v = uniform01(rng);
        for (std::size_t i = 1; i <= count; ++i) {
            std::vector<double> di(d.size());
            for (std::size_t j = 0; j < d.size(); ++j) di[j] = scale * static_cast<double>(i) * d[j];
            systems.push_back({add_diagonal(a, di), b});
            labels.push_back("system " + std::to_string(i));
        }
    }
    if (o.precond == "none") o.cfg.precond_side = PrecondSide::none;

    std::vector<SolveReport> reports;
    if (fresh) {
        for (const auto& s : systems) reports.push_back(std::move(solve_sequence({s}, o.cfg).reports.front()));
    } else {
        reports = solve_sequence(systems, o.cfg).reports;
    }
    std::size_t total = 0;
    bool all = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        print_report(out, labels[i], reports[i]);
        total += reports[i].matvec_count;
        all = all && reports[i].converged;
    }
    out << "total matvecs: " << total << '\n';
    if (!o.report.empty()) {
        std::ofstream f(o.report, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + o.report + " for writing");
        f << "system,converged,cycles,matvecs\n";
        for (std::size_t i = 0; i < reports.size(); ++i)
            f << i + 1 << ',' << (reports[i].converged ? 1 : 0) << ',' << reports[i].cycles << ','
              << reports[i].matvec_count << '\n';
    }
    return all ? 0 : 2;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Block GMRES and block GCRO-DR solvers with kernel benchmarks", "bgcrodr"};
    app.require_subcommand(1);

    std::string matrix, banded, rs_in, rs_out, perturb, csv, svg, out_path;
    std::vector<std::string> matrices;
    SolveOptions so;
    bool fresh = false;

    auto* solve = app.add_subcommand("solve", "solve one system");
    solve->add_option("--matrix", matrix, "Matrix Market file")->required()->check(CLI::ExistingFile);
    add_solver_flags(solve, so);
    solve->add_option("--recycle-in", rs_in, "recycle space to start from")->check(CLI::ExistingFile);
    solve->add_option("--recycle-out", rs_out, "write the final recycle space");

    auto* seq = app.add_subcommand("solve-seq", "solve a sequence of systems, carrying the recycle space");
    auto* mopt = seq->add_option("--matrices", matrices, "Matrix Market files, in order")
                     ->delimiter(',')
                     ->check(CLI::ExistingFile);
    auto* popt = seq->add_option("--perturb", perturb, "COUNT,SCALE: A_i = A + SCALE*i*D with seeded diagonal D");
    seq->add_option("--matrix", matrix, "base matrix for --perturb")->check(CLI::ExistingFile);
    seq->add_flag("--fresh", fresh, "solve each system from scratch (no carried recycle space)");
    mopt->excludes(popt);
    add_solver_flags(seq, so);

    BenchOptions bo;
    std::vector<std::size_t> block_sizes = default_block_sizes();
    std::vector<std::size_t> dim_cs{10, 50, 100};
    std::string ortho_name = "mgs";
    std::size_t bench_threads = 1;
    bool no_warmup = false;
    auto add_bench_flags = [&](CLI::App* sub) {
        auto* mf = sub->add_option("--matrix", matrix, "Matrix Market file")->check(CLI::ExistingFile);
        auto* bf = sub->add_option("--banded", banded, "N,BAND: generate a banded matrix");
        mf->excludes(bf);
        sub->add_option("--block-sizes", block_sizes)->delimiter(',');
        sub->add_option("--reps", bo.reps)->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--seed", bo.seed)->capture_default_str();
        sub->add_option("--csv", csv, "write results as CSV");
        sub->add_option("--svg", svg, "write ratio-vs-L plot");
        sub->add_option("--threads", bench_threads)->capture_default_str();
        sub->add_flag("--no-warmup", no_warmup);
    };
    auto* bm = app.add_subcommand("bench-matvec", "time block versus one-at-a-time products with A");
    add_bench_flags(bm);
    auto* bp = app.add_subcommand("bench-projected", "same, for (I - C C^T) A");
    add_bench_flags(bp);
    bp->add_option("--dim-c", dim_cs)->delimiter(',');
    bp->add_option("--ortho", ortho_name)->check(CLI::IsMember({"mgs", "cgs2", "both"}))->capture_default_str();

    std::size_t gn = 0, gband = 0;
    std::uint64_t gseed = 0;
    auto* gb = app.add_subcommand("gen-banded", "write a seeded banded matrix");
    gb->add_option("--n", gn)->required();
    gb->add_option("--band", gband, "half-bandwidth")->required();
    gb->add_option("--seed", gseed)->capture_default_str();
    gb->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return run_solve(matrix, so, rs_in, rs_out, out);
        if (seq->parsed()) {
            if (matrices.empty() && perturb.empty()) throw CLI::RequiredError("--matrices or --perturb");
            return run_solve_seq(matrices, matrix, perturb, fresh, so, out);
        }
        if (bm->parsed() || bp->parsed()) {
            if (matrix.empty() && banded.empty()) throw CLI::RequiredError("--matrix or --banded");
            kernels::set_threads(static_cast<int>(bench_threads));
            bo.warmup = !no_warmup;
            const auto a = load_or_generate(matrix, banded, bo.seed, bo.matrix_id);
            std::vector<BenchResult> results;
            if (bm->parsed()) {
                results = bench_matvec(a, block_sizes, bo);
            } else {
                if (ortho_name != "cgs2") results = bench_projected(a, dim_cs, block_sizes, Ortho::mgs, bo);
                if (ortho_name != "mgs") {
                    auto more = bench_projected(a, dim_cs, block_sizes, Ortho::cgs2, bo);
                    results.insert(results.end(), more.begin(), more.end());
                }
            }
            if (!csv.empty()) emit_csv(results, std::filesystem::path(csv));
            else emit_csv(results, out);
            if (!svg.empty()) emit_plot(results, std::filesystem::path(svg));
            for (const auto& r : block_ratios(results)) {
                char buf[200];
                std::snprintf(buf, sizeof buf, "%s L=%zu time_ratio=%.3f bytes_ratio=%.3f\n", r.series.c_str(),
                              r.block_size, r.time_ratio, r.bytes_ratio);
                err << buf;
            }
            return 0;
        }
        if (gb->parsed()) {
            write_matrix_market(gen_banded(gn, gband, gseed), std::filesystem::path(out_path));
            return 0;
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace bgcrodr
