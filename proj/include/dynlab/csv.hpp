#ifndef DYNLAB_CSV_HPP
#define DYNLAB_CSV_HPP

#include <string>
#include <vector>

namespace dynlab::csv {

/// Writes a CSV table: header row from the schema, one line per row,
/// 17-significant-digit floats with '.' decimal separator and LF line
/// endings. Byte-stable across runs for identical inputs.
void write_table(const std::vector<std::vector<double>>& rows,
                 const std::vector<std::string>& schema,
                 const std::string& path);

/// One float in the table format ("%.17g").
std::string format_value(double v);

}  // namespace dynlab::csv

#endif
