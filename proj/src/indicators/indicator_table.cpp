#include "wsim/indicators/indicator_table.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace wsim::ind {

void IndicatorTable::add(std::string indicator, std::string group, double value, std::string notes) {
    rows_.push_back({std::move(indicator), std::move(group), value, std::move(notes)});
}

void IndicatorTable::append(const IndicatorTable &other) {
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

std::optional<double> IndicatorTable::find(std::string_view indicator, std::string_view group) const {
    for (const auto &r : rows_)
        if (r.indicator == indicator && r.group == group) return r.value;
    return std::nullopt;
}

std::string IndicatorTable::to_csv() const {
    std::ostringstream out;
    csv::write_row(out, {"indicator", "group", "value", "notes"});
    for (const auto &r : rows_)
        csv::write_row(out, {r.indicator, r.group, std::isnan(r.value) ? std::string{} : csv::format_double(r.value),
                             r.notes});
    return out.str();
}

IndicatorTable IndicatorTable::parse_csv(std::string_view text) {
    const auto t = csv::parse_table(text);
    const auto ci = t.column("indicator"), cg = t.column("group"), cv = t.column("value"), cn = t.column("notes");
    if (!ci || !cg || !cv) throw SchemaError("indicator table needs columns indicator, group, value");
    IndicatorTable out;
    for (const auto &row : t.rows) {
        if (row.size() < t.header.size()) throw SchemaError("short row in indicator table");
        const auto &v = row[*cv];
        out.add(row[*ci], row[*cg], v.empty() ? std::nan("") : csv::parse_double(v, "value"),
                cn ? row[*cn] : std::string{});
    }
    return out;
}

std::string format_fixed(double value, int decimals) {
    if (std::isnan(value)) return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

std::string Panel::to_csv() const {
    std::ostringstream out;
    csv::Row header{corner};
    header.insert(header.end(), columns.begin(), columns.end());
    csv::write_row(out, header);
    for (const auto &line : lines) {
        csv::Row r{line.label};
        if (line.values.empty()) {
            r.resize(columns.size() + 1);
        } else {
            for (double v : line.values) r.push_back(format_fixed(v, line.decimals < 0 ? decimals : line.decimals));
        }
        csv::write_row(out, r);
    }
    return out.str();
}

} // namespace wsim::ind
