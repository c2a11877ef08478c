#include "skomap/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace skomap {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view field, const std::string& source, std::size_t line) {
    field = trim(field);
    if (field.starts_with('+')) field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw CsvParseError(source + ":" + std::to_string(line) + ": cannot parse number '" + std::string(field) + "'",
                            line);
    }
    if (std::isnan(value)) {
        throw CsvParseError(source + ":" + std::to_string(line) + ": NaN is not a valid value", line);
    }
    return value;
}

}  // namespace

std::string format_double(double v) {
    if (v == INFINITY) return "inf";
    if (v == -INFINITY) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

GridPath read_path_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw CsvParseError(source + ": empty file", 1);
    ++lineno;
    {
        const auto header = trim(line);
        const auto comma = header.find(',');
        if (comma == std::string_view::npos || trim(header.substr(0, comma)) != "t" ||
            trim(header.substr(comma + 1)) != "value") {
            throw CsvParseError(source + ":1: expected header 't,value'", 1);
        }
    }
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        const auto row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw CsvParseError(source + ":" + std::to_string(lineno) + ": expected two fields", lineno);
        }
        const double t = parse_number(row.substr(0, comma), source, lineno);
        const double v = parse_number(row.substr(comma + 1), source, lineno);
        if (!std::isfinite(t)) throw CsvParseError(source + ":" + std::to_string(lineno) + ": time must be finite", lineno);
        if (times.empty() && t != 0.0) {
            throw CsvParseError(source + ":" + std::to_string(lineno) + ": first row must have t = 0", lineno);
        }
        if (!times.empty() && !(t > times.back())) {
            throw CsvParseError(source + ":" + std::to_string(lineno) + ": times must be strictly increasing", lineno);
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (times.size() < 2) throw CsvParseError(source + ": need at least two rows", lineno);
    return GridPath(TimeGrid(std::move(times)), std::move(values));
}

GridPath read_path_csv_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw CsvParseError("cannot open " + filename, 0);
    return read_path_csv(in, filename);
}

void write_path_csv(std::ostream& out, const GridPath& path) {
    out << "t,value\n";
    const auto pts = path.grid().points();
    for (std::size_t k = 0; k < path.size(); ++k) {
        out << format_double(pts[k]) << ',' << format_double(path[k]) << '\n';
    }
}

void write_path_csv_file(const std::string& filename, const GridPath& path) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw UsageError("cannot write " + filename);
    write_path_csv(out, path);
}

}  // namespace skomap
