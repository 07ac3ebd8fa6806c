#pragma once

// Report documents: a JSON object for the full result and a flat CSV table
// (case_id, inputs_hash, verdict, gap, seed) for plotting and diffing.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sdrdu/error.hpp"

namespace sdrdu {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kReportSchemaVersion = "1";

enum class ReportFormat { json, csv };

struct CsvRow {
    std::string case_id;
    std::string inputs_hash;
    std::string verdict;
    std::optional<double> gap;
};

struct Report {
    nlohmann::ordered_json document;
    std::vector<CsvRow> rows;
    std::uint64_t seed = 0;
};

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string inputs_hash(const nlohmann::ordered_json& inputs) { return fnv1a_hex(inputs.dump()); }

/// Shortest text that reads back as the same double; "inf"/"-inf"/"nan" for
/// non-finite values.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv(std::ostream& os, const Report& r) {
    os << "case_id,inputs_hash,verdict,gap,seed\r\n";
    for (const auto& row : r.rows) {
        os << csv_field(row.case_id) << ',' << csv_field(row.inputs_hash) << ',' << csv_field(row.verdict) << ','
           << (row.gap ? format_number(*row.gap) : std::string()) << ',' << r.seed << "\r\n";
    }
}

inline void write_json(std::ostream& os, const Report& r) { os << r.document.dump(2) << '\n'; }

inline void write_report(std::ostream& os, const Report& r, ReportFormat format) {
    if (format == ReportFormat::csv) {
        write_csv(os, r);
    } else {
        write_json(os, r);
    }
}

/// Writes to `path`, or to `fallback` when the path is empty. Throws
/// ValidationError("output", ...) when the file cannot be written.
inline void emit_report(const Report& r, ReportFormat format, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        write_report(fallback, r, format);
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("output", "cannot open '" + path + "' for writing");
    write_report(f, r, format);
    f.flush();
    if (!f) throw ValidationError("output", "failed writing '" + path + "'");
}

}  // namespace sdrdu
