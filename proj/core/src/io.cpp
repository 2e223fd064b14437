#include "eitcool/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "eitcool/errors.hpp"

namespace eitcool {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        if (k) out << ',';
        out << table.header[k];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw DimensionError("write_csv: row width does not match header");
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out << ',';
            out << format_number(row[k]);
        }
        out << '\n';
    }
}

CsvTable to_table(const TimeSeries& series) {
    CsvTable t;
    t.header.push_back("t");
    for (const auto& n : series.names())
        if (n != "trace") t.header.push_back(n);
    t.header.push_back("trace");
    t.header.push_back("leakage");
    const std::size_t tr = series.column_index("trace");
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::vector<double> row{series.times()[i]};
        const auto& rec = series.records()[i];
        for (std::size_t k = 0; k < rec.size(); ++k)
            if (k != tr) row.push_back(rec[k]);
        row.push_back(rec[tr]);
        row.push_back(series.leakage()[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable to_table(const SpectrumSeries& s) {
    CsvTable t;
    if (s.kind == SpectrumKind::absorption) {
        t.header = {"omega", "absorption"};
        for (std::size_t i = 0; i < s.omegas.size(); ++i) t.rows.push_back({s.omegas[i], s.values[i].real()});
    } else {
        t.header = {"omega", "re", "im"};
        for (std::size_t i = 0; i < s.omegas.size(); ++i) {
            t.rows.push_back({s.omegas[i], s.values[i].real(), s.values[i].imag()});
        }
    }
    return t;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256: digest computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(data);
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace eitcool
