#include "liqvap/csv.hpp"

#include "liqvap/errors.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

namespace liqvap {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

} // namespace

void CsvWriter::comment(const std::string& line) {
    if (header_written_)
        throw Error("CsvError", "metadata comments must precede the header");
    os_ << "# " << line << "\n";
}

void CsvWriter::header(std::span<const std::string> columns) {
    if (header_written_)
        throw Error("CsvError", "header already written");
    n_columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i)
            os_ << ',';
        os_ << (needs_quoting(columns[i]) ? quoted(columns[i]) : columns[i]);
    }
    os_ << "\n";
    header_written_ = true;
}

void CsvWriter::row(std::span<const CsvValue> values) {
    if (!header_written_)
        throw Error("CsvError", "row before header");
    if (values.size() != n_columns_)
        throw Error("CsvError", "row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            os_ << ',';
        if (const double* d = std::get_if<double>(&values[i]))
            os_ << format_double(*d);
        else {
            const std::string& s = std::get<std::string>(values[i]);
            os_ << (needs_quoting(s) ? quoted(s) : s);
        }
    }
    os_ << "\n";
}

void CsvWriter::abandon() {
    os_ << "# INCOMPLETE\n";
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            if (body == "INCOMPLETE")
                t.incomplete = true;
            t.comments.push_back(body);
            continue;
        }
        if (t.columns.empty())
            t.columns = split_fields(line);
        else
            t.rows.push_back(split_fields(line));
    }
    for (const auto& r : t.rows)
        if (r.size() != t.columns.size())
            throw Error("CsvError", "ragged row in CSV input");
    return t;
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return static_cast<int>(i);
    return -1;
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    return std::stod(rows.at(row).at(col));
}

} // namespace liqvap
