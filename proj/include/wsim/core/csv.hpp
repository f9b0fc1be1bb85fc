#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wsim::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;

    /// Column index by header name, or nullopt.
    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
Row split_line(std::string_view line, char delimiter = ',');

/// Reads a header + rows table. Blank lines and lines starting with '#' are skipped.
Table read_table(const std::filesystem::path &path, char delimiter = ',');
Table parse_table(std::string_view text, char delimiter = ',');

/// A file made of `[section]` headers, each followed by a header row and data rows.
/// Returns sections in file order keyed by name.
std::map<std::string, Table> read_sections(const std::filesystem::path &path);
std::map<std::string, Table> parse_sections(std::string_view text);

std::string quote_if_needed(std::string_view field, char delimiter = ',');
void write_row(std::ostream &out, const Row &row, char delimiter = ',');

/// Shortest decimal representation that round-trips.
std::string format_double(double value);

double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

std::string read_file(const std::filesystem::path &path);

} // namespace wsim::csv
