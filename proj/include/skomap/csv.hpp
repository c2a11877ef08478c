#pragma once

// Path CSV format: a `t,value` header followed by rows sorted by strictly
// increasing t, starting at t = 0. `inf` / `-inf` are accepted as values.
// Numbers are written with 17 significant digits, which round-trips doubles.

#include <iosfwd>
#include <string>

#include "skomap/errors.hpp"
#include "skomap/path.hpp"

namespace skomap {

class CsvParseError : public UsageError {
public:
    CsvParseError(const std::string& what, std::size_t line) : UsageError(what), line_(line) {}
    // 1-based line number within the file (header is line 1).
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// `source` names the input in diagnostics.
GridPath read_path_csv(std::istream& in, const std::string& source = "<stream>");
GridPath read_path_csv_file(const std::string& filename);

void write_path_csv(std::ostream& out, const GridPath& path);
void write_path_csv_file(const std::string& filename, const GridPath& path);

// 17-significant-digit decimal; `inf`, `-inf` for infinities.
std::string format_double(double v);

}  // namespace skomap
