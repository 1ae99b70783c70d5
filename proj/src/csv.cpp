#include "ecca/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>

#include "ecca/errors.hpp"

namespace ecca {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
    std::size_t begin = 0;
    std::size_t end = field.size();
    while (begin < end && (field[begin] == ' ' || field[begin] == '\t')) ++begin;
    while (end > begin && (field[end - 1] == ' ' || field[end - 1] == '\t')) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data() + begin, field.data() + end, value);
    if (ec != std::errc() || ptr != field.data() + end || begin == end) {
        throw DimensionError(path + ": line " + std::to_string(line_no) +
                             ": cannot parse number '" + field + "'");
    }
    return value;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DimensionError(path + ": cannot open file");

    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            table.header = split_fields(line);
            cols = table.header.size();
            continue;
        }
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != cols) {
            throw DimensionError(path + ": line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(cols) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        for (const std::string& f : fields) {
            values.push_back(parse_field(f, path, line_no));
        }
        ++rows;
    }
    if (line_no == 0) throw DimensionError(path + ": empty file (missing header row)");
    if (rows == 0) throw DimensionError(path + ": no data rows");

    try {
        table.values = Matrix(rows, cols, std::move(values));
    } catch (const ValueError&) {
        throw DimensionError(path + ": non-finite value in data");
    }
    return table;
}

Matrix read_matrix_csv(const std::string& path) {
    return read_csv(path).values;
}

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& column_names) {
    if (column_names.size() != m.cols()) {
        throw DimensionError("write_matrix_csv: header length does not match columns");
    }
    std::ofstream out(path);
    if (!out) throw DimensionError(path + ": cannot open for writing");
    for (std::size_t j = 0; j < column_names.size(); ++j) {
        if (j > 0) out << ',';
        out << column_names[j];
    }
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw DimensionError(path + ": write failed");
}

std::vector<std::string> numbered_columns(const std::string& prefix, std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

}  // namespace ecca
