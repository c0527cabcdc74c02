#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace landair::io {

/// Numeric CSV with a mandatory header row. Comma separated, '.' decimal
/// point, UTF-8, no quoting.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);

/// Renders a double with 12 significant digits, locale-independent.
std::string format_number(double value);

/// Writes header + rows, one '\n' per line, rows in the given order.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace landair::io
