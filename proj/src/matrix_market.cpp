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

#include "bgcrodr/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bgcrodr/errors.hpp"

namespace bgcrodr {

namespace {

enum class Format { coordinate, array };
enum class Symmetry { general, symmetric, skew };

struct Header {
    Format format = Format::coordinate;
    Symmetry symmetry = Symmetry::general;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next line that is neither blank nor a comment.
    bool next_data(std::string& line) {
        while (std::getline(in_, line)) {
            ++number_;
            const auto p = line.find_first_not_of(" \t\r");
            if (p == std::string::npos || line[p] == '%') continue;
            return true;
        }
        return false;
    }
    bool next_raw(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++number_;
        return true;
    }
    std::size_t number() const { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

Header parse_header(LineReader& reader) {
    std::string line;
    if (!reader.next_raw(line)) throw ParseError("empty file", 1);
    std::istringstream ss(line);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", reader.number());
    if (lower(object) != "matrix") throw ParseError("unsupported object '" + object + "'", reader.number());
    Header h;
    format = lower(format);
    if (format == "coordinate")
        h.format = Format::coordinate;
    else if (format == "array")
        h.format = Format::array;
    else
        throw ParseError("unsupported format '" + format + "'", reader.number());
    field = lower(field);
    if (field != "real" && field != "integer" && field != "double")
        throw ParseError("unsupported field '" + field + "' (only real/integer)", reader.number());
    symmetry = lower(symmetry);
    if (symmetry == "general")
        h.symmetry = Symmetry::general;
    else if (symmetry == "symmetric")
        h.symmetry = Symmetry::symmetric;
    else if (symmetry == "skew-symmetric")
        h.symmetry = Symmetry::skew;
    else
        throw ParseError("unsupported symmetry '" + symmetry + "'", reader.number());
    return h;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars rejects a leading '+', strtod does not.
        if (first != last && *first == '+') ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> tokens(const std::string& line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const auto start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.emplace_back(line.data() + start, i - start);
    }
    return out;
}

struct Coordinate {
    std::size_t rows = 0, cols = 0;
    std::vector<Triplet> entries;
};

Coordinate read_coordinate_body(LineReader& reader, const Header& h) {
    std::string line;
    if (!reader.next_data(line)) throw ParseError("missing size line", reader.number() + 1);
    auto tok = tokens(line);
    Coordinate c;
    std::size_t declared = 0;
    if (tok.size() < 3 || !parse_number(tok[0], c.rows) || !parse_number(tok[1], c.cols) ||
        !parse_number(tok[2], declared))
        throw ParseError("malformed size line, expected 'rows cols nnz'", reader.number());
    if (h.symmetry != Symmetry::general && c.rows != c.cols)
        throw ParseError("symmetric matrix must be square", reader.number());
    c.entries.reserve(h.symmetry == Symmetry::general ? declared : 2 * declared);
    for (std::size_t k = 0; k < declared; ++k) {
        if (!reader.next_data(line))
            throw ParseError("expected " + std::to_string(declared) + " entries, found " + std::to_string(k),
                             reader.number() + 1);
        tok = tokens(line);
        std::size_t i = 0, j = 0;
        double v = 0.0;
        if (tok.size() < 3 || !parse_number(tok[0], i) || !parse_number(tok[1], j) || !parse_number(tok[2], v))
            throw ParseError("malformed entry, expected 'row col value'", reader.number());
        if (i < 1 || i > c.rows || j < 1 || j > c.cols)
            throw ParseError("index (" + std::to_string(i) + "," + std::to_string(j) + ") outside declared " +
                                 std::to_string(c.rows) + "x" + std::to_string(c.cols),
                             reader.number());
        c.entries.push_back({i - 1, j - 1, v});
        if (h.symmetry != Symmetry::general && i != j)
            c.entries.push_back({j - 1, i - 1, h.symmetry == Symmetry::skew ? -v : v});
    }
    while (reader.next_data(line))
        if (!tokens(line).empty()) throw ParseError("unexpected data after declared entries", reader.number());
    return c;
}

DenseBlock read_array_body(LineReader& reader, const Header& h) {
    std::string line;
    if (!reader.next_data(line)) throw ParseError("missing size line", reader.number() + 1);
    auto tok = tokens(line);
    std::size_t rows = 0, cols = 0;
    if (tok.size() < 2 || !parse_number(tok[0], rows) || !parse_number(tok[1], cols))
        throw ParseError("malformed size line, expected 'rows cols'", reader.number());
    DenseBlock b(rows, cols);
    // Column-major listing; symmetric arrays list the lower triangle only.
    for (std::size_t j = 0; j < cols; ++j) {
        const std::size_t i0 = h.symmetry == Symmetry::general ? 0 : j;
        for (std::size_t i = i0; i < rows; ++i) {
            if (!reader.next_data(line)) throw ParseError("array data ends early", reader.number() + 1);
            tok = tokens(line);
            double v = 0.0;
            if (tok.empty() || !parse_number(tok[0], v)) throw ParseError("malformed array value", reader.number());
            b(i, j) = v;
            if (h.symmetry != Symmetry::general && i != j) b(j, i) = h.symmetry == Symmetry::skew ? -v : v;
        }
    }
    return b;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

CsrMatrix read_matrix_market(std::istream& in) {
    LineReader reader(in);
    const auto h = parse_header(reader);
    if (h.format != Format::coordinate) throw ParseError("sparse reader requires coordinate format", 1);
    auto c = read_coordinate_body(reader, h);
    return CsrMatrix::from_triplets(c.rows, c.cols, std::move(c.entries));
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return read_matrix_market(in);
}

DenseBlock read_matrix_market_dense(std::istream& in) {
    LineReader reader(in);
    const auto h = parse_header(reader);
    if (h.format == Format::array) return read_array_body(reader, h);
    auto c = read_coordinate_body(reader, h);
    DenseBlock b(c.rows, c.cols);
    for (const auto& t : c.entries) b(t.row, t.col) += t.value;
    return b;
}

DenseBlock read_matrix_market_dense(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return read_matrix_market_dense(in);
}

void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
    char buf[64];
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.n_rows() << ' ' << a.n_cols() << ' ' << a.nnz() << '\n';
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto v = a.values();
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", v[k]);
            out << (i + 1) << ' ' << (ci[k] + 1) << ' ' << buf << '\n';
        }
}

void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_matrix_market(a, out);
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_matrix_market_dense(ConstBlockView b, std::ostream& out) {
    char buf[64];
    out << "%%MatrixMarket matrix array real general\n";
    out << b.rows << ' ' << b.cols << '\n';
    for (std::size_t j = 0; j < b.cols; ++j)
        for (std::size_t i = 0; i < b.rows; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", b(i, j));
            out << buf << '\n';
        }
}

}  // namespace bgcrodr
