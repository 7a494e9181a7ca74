#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace liqvap {

// Shortest round-trip rendering of a double (%.17g equivalent), C locale.
std::string format_double(double v);

using CsvValue = std::variant<double, std::string>;

// RFC-4180-style writer with '#'-prefixed metadata lines before the header.
// The column count is fixed by the header; mismatched rows throw. On scopes
// that die before finish(), abandon() leaves a trailing "# INCOMPLETE" marker
// so partial files are never mistaken for results.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(const std::string& line);
    void header(std::span<const std::string> columns);
    void row(std::span<const CsvValue> values);
    void abandon(); // writes the INCOMPLETE marker

    std::size_t columns() const { return n_columns_; }

private:
    std::ostream& os_;
    std::size_t n_columns_ = 0;
    bool header_written_ = false;
};

// Matching reader: skips '#' comments, splits the header and data rows,
// unquotes RFC-4180 fields. Every emitted file parses back through this.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool incomplete = false;

    int column_index(const std::string& name) const; // -1 when absent
    double number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(std::istream& is);

} // namespace liqvap
