#include "cec/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "cec/error.hpp"

namespace cec::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            auto cell = trim(line.substr(start, i - start));
            if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
            cells.push_back(cell);
            start = i + 1;
        }
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

DataMatrix read_csv(std::istream& in) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool first_content = true;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_cells(line);
        std::vector<double> parsed;
        parsed.reserve(cells.size());
        std::optional<std::size_t> bad;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_number(cells[c]);
            if (!v) {
                bad = c;
                break;
            }
            parsed.push_back(*v);
        }
        if (bad) {
            if (first_content) {
                first_content = false;
                cols = cells.size();
                continue;  // header
            }
            throw DataError("line " + std::to_string(line_no) + ": non-numeric cell '" + std::string(cells[*bad]) + "'");
        }
        if (first_content) {
            first_content = false;
            cols = parsed.size();
        } else if (cols == 0) {
            cols = parsed.size();
        }
        if (parsed.size() != cols) {
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                            " columns, found " + std::to_string(parsed.size()));
        }
        values.insert(values.end(), parsed.begin(), parsed.end());
        ++rows;
    }
    if (rows == 0) throw DataError("no data rows");
    if (rows < 2) throw DataError("need at least two data rows, found " + std::to_string(rows));
    return DataMatrix(rows, cols, std::move(values));
}

DataMatrix ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    try {
        return read_csv(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_csv(std::ostream& out, const DataMatrix& data) {
    char buf[32];
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            if (j) out << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", data(i, j));
            out << buf;
        }
        out << '\n';
    }
}

void write_membership_csv(std::ostream& out, const Assignment& membership) {
    for (int label : membership) out << label << '\n';
}

}  // namespace cec::cli
