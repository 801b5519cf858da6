#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace stablevol {

/// Thrown on unwritable/unreadable paths; the offending path is in message().
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::domain_error("parse_double: not a real number: '" + std::string(text) + "'");
    }
    return value;
}

/// Write one CSV file: header row then records, UTF-8 with LF line endings.
/// Fields are written verbatim; numeric callers format via format_double so
/// every real round-trips bit-identically.
inline void emit_csv(std::span<const std::string> header,
                     std::span<const std::vector<std::string>> rows,
                     const std::filesystem::path& path) {
    if (header.empty()) throw std::domain_error("emit_csv: schema must be non-empty");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("emit_csv: cannot open '" + path.string() + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw std::domain_error("emit_csv: row width " + std::to_string(row.size()) +
                                    " does not match schema width " +
                                    std::to_string(header.size()));
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("emit_csv: write to '" + path.string() + "' failed");
}

}  // namespace stablevol
