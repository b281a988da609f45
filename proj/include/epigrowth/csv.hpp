#pragma once

#include "epigrowth/error.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unistd.h>
#include <vector>

namespace epigrowth::csv
{

struct Row {
    std::size_t line = 0; // 1-based
    std::vector<std::string> fields;
};

/// Splits one record. Double quotes delimit fields and "" escapes a quote;
/// quoted fields may not span lines.
inline std::vector<std::string> split_line(std::string_view line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                }
                else {
                    quoted = false;
                }
            }
            else {
                fields.back() += c;
            }
        }
        else if (c == '"') {
            quoted = true;
        }
        else if (c == ',') {
            fields.emplace_back();
        }
        else {
            fields.back() += c;
        }
    }
    return fields;
}

/// Reads all non-blank lines. Throws IoError when the file cannot be opened.
inline std::vector<Row> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<Row> rows;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (n == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        rows.push_back({n, split_line(line)});
    }
    return rows;
}

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

/// Strict number parse: the whole cell must be a finite number.
inline std::optional<double> to_double(std::string_view cell)
{
    const std::string s = trim(cell);
    if (s.empty()) {
        return std::nullopt;
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

inline std::optional<int> to_int(std::string_view cell)
{
    const std::string s = trim(cell);
    if (s.empty()) {
        return std::nullopt;
    }
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        return std::nullopt;
    }
    return int(v);
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double v)
{
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

inline std::string quote(std::string_view field)
{
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

} // namespace epigrowth::csv

namespace epigrowth
{

/// Writes `content` to a temporary sibling and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace epigrowth
