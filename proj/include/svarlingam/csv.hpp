#pragma once

#include "svarlingam/core.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace svarlingam::csv {

/// Shortest decimal text that parses back to the same double.
inline std::string format(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

/// Fixed-precision rendering for human-facing tables.
inline std::string format_fixed(double v, int digits) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return std::string(buf, r.ptr);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                          s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                          s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

/// Splits one comma-delimited record. Double-quoted fields may contain commas;
/// a doubled quote inside a quoted field is a literal quote.
inline std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.emplace_back(trim(cur));
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Reads a header-led CSV file. Blank lines are skipped; a UTF-8 BOM is ignored.
inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::schema, "cannot open " + path);
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        if (lineno == 1 && sv.size() >= 3 && sv.substr(0, 3) == "\xEF\xBB\xBF") sv.remove_prefix(3);
        if (trim(sv).empty()) continue;
        if (!have_header) {
            t.header = split_record(sv);
            have_header = true;
            continue;
        }
        t.rows.push_back(split_record(sv));
        t.line_numbers.push_back(lineno);
    }
    if (!have_header) throw Error(Errc::empty_input, path + " is empty");
    return t;
}

inline std::size_t column_index(const Table& t, const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
    throw Error(Errc::schema, path + ": missing column '" + name + "'");
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::config, "cannot write " + path);
    out << text;
}

}  // namespace svarlingam::csv
