#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eitcool/analytics.hpp"
#include "eitcool/dynamics.hpp"

namespace eitcool {

// Shortest round-trip text with 17 significant digits, '.' decimal.
std::string format_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable to_table(const TimeSeries& series);
CsvTable to_table(const SpectrumSeries& spectrum);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Writes atomically enough for our purposes; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace eitcool
