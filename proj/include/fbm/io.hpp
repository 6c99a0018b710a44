#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

// CSV and raw-float64 readers/writers for path matrices. CSV uses 17
// significant digits so a write/read round trip reproduces every double
// exactly; the raw format is little-endian float64, one column after another.

namespace fbm::io {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// header: <index_name>,col_0,col_1,...; one row per grid point
inline void write_csv(const std::string& path, const std::string& index_name,
                      const std::vector<double>& index,
                      const std::string& column_prefix,
                      const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << index_name;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != index.size())
            throw std::invalid_argument("column length mismatch");
        out << ',' << column_prefix << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < index.size(); ++r) {
        out << format_double(index[r]);
        for (const auto& col : columns) out << ',' << format_double(col[r]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

inline Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t comma = line.find(',', pos);
        const std::size_t end = comma == std::string::npos ? line.size() : comma;
        table.names.push_back(line.substr(pos, end - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    table.columns.resize(table.names.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const char* p = line.c_str();
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            char* next = nullptr;
            const double v = std::strtod(p, &next);
            if (next == p)
                throw std::runtime_error("bad number at row " + std::to_string(row) +
                                         " in " + path);
            table.columns[c].push_back(v);
            p = next;
            if (*p == ',') ++p;
        }
    }
    return table;
}

namespace detail {

inline void put_le(std::ofstream& out, double v) {
    static_assert(sizeof(double) == 8);
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xff);
        bits = r;
    }
    char raw[8];
    std::memcpy(raw, &bits, 8);
    out.write(raw, 8);
}

inline double get_le(const char* raw) {
    std::uint64_t bits;
    std::memcpy(&bits, raw, 8);
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xff);
        bits = r;
    }
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace detail

// columns written back to back, each value as little-endian float64
inline void write_raw(const std::string& path,
                      const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& col : columns)
        for (double v : col) detail::put_le(out, v);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<double> read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    in.seekg(0, std::ios::end);
    const std::streamoff bytes = in.tellg();
    in.seekg(0, std::ios::beg);
    if (bytes < 0 || bytes % 8 != 0)
        throw std::runtime_error("raw file size not a multiple of 8: " + path);
    std::vector<double> values(static_cast<std::size_t>(bytes / 8));
    std::vector<char> buf(static_cast<std::size_t>(bytes));
    if (bytes > 0) in.read(buf.data(), bytes);
    if (!in) throw std::runtime_error("read failed: " + path);
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = detail::get_le(buf.data() + 8 * i);
    return values;
}

} // namespace fbm::io
