#include "dynlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dynlab::csv {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_table(const std::vector<std::vector<double>>& rows,
                 const std::vector<std::string>& schema,
                 const std::string& path) {
    for (const auto& row : rows)
        if (row.size() != schema.size())
            throw std::invalid_argument("write_table: schema/row width mismatch");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_table: path not writable: " + path);
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i) out << ',';
        out << schema[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_value(row[i]);
        }
        out << '\n';
    }
    out.flush();
    if (!out)
        throw std::runtime_error("write_table: write failed: " + path);
}

}  // namespace dynlab::csv
