#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wsim::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool skippable(std::string_view line) {
    line = trim(line);
    return line.empty() || line.front() == '#';
}

} // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

Row split_line(std::string_view line, char delimiter) {
    Row out;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == delimiter) {
            out.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else if (c != '\r' && c != '\n') {
            field.push_back(c);
        }
    }
    out.push_back(was_quoted ? field : std::string(trim(field)));
    return out;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Table parse_table(std::string_view text, char delimiter) {
    Table t;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!have_header) {
            // A UTF-8 byte order mark is tolerated on the header line only.
            if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        }
        if (skippable(line)) {
            if (end == text.size()) break;
            continue;
        }
        auto row = split_line(line, delimiter);
        if (!have_header) {
            t.header = std::move(row);
            have_header = true;
        } else {
            t.rows.push_back(std::move(row));
        }
        if (end == text.size()) break;
    }
    return t;
}

Table read_table(const std::filesystem::path &path, char delimiter) {
    return parse_table(read_file(path), delimiter);
}

std::map<std::string, Table> parse_sections(std::string_view text) {
    std::map<std::string, Table> sections;
    Table *current = nullptr;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (skippable(line)) continue;
        if (line.front() == '[' && line.back() == ']') {
            auto name = std::string(trim(line.substr(1, line.size() - 2)));
            if (sections.contains(name)) throw SchemaError("duplicate section [" + name + "]");
            current = &sections[name];
            have_header = false;
            continue;
        }
        if (current == nullptr) throw SchemaError("data before first [section] header");
        auto row = split_line(line);
        if (!have_header) {
            current->header = std::move(row);
            have_header = true;
        } else {
            current->rows.push_back(std::move(row));
        }
    }
    return sections;
}

std::map<std::string, Table> read_sections(const std::filesystem::path &path) {
    return parse_sections(read_file(path));
}

std::string quote_if_needed(std::string_view field, char delimiter) {
    if (field.find_first_of(std::string{delimiter} + "\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream &out, const Row &row, char delimiter) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << delimiter;
        out << quote_if_needed(row[i], delimiter);
    }
    out << '\n';
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    if (text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    double v = 0.0;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw SchemaError("invalid number '" + std::string(text) + "' for " + std::string(what));
    return v;
}

long long parse_int(std::string_view text, std::string_view what) {
    text = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw SchemaError("invalid integer '" + std::string(text) + "' for " + std::string(what));
    return v;
}

} // namespace wsim::csv
