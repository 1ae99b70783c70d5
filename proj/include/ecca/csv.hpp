#pragma once

#include <string>
#include <vector>

#include "ecca/matrix.hpp"

namespace ecca {

// 17 significant digits: enough for an exact double round-trip.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;  // rows as stored in the file
};

// UTF-8, comma-delimited, exactly one header row. Parse failures name the
// 1-based line number.
CsvTable read_csv(const std::string& path);
Matrix read_matrix_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& column_names);

// Column names "prefix1".."prefixN".
std::vector<std::string> numbered_columns(const std::string& prefix, std::size_t count);

}  // namespace ecca
