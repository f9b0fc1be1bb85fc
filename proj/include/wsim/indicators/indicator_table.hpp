#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wsim::ind {

struct IndicatorRow {
    std::string indicator;
    std::string group; ///< decile, band or summary label
    double value = 0.0;
    std::string notes; ///< weighting scheme or convention
};

/// Long-format indicator output: indicator,group,value,notes.
class IndicatorTable {
  public:
    void add(std::string indicator, std::string group, double value, std::string notes = {});
    void append(const IndicatorTable &other);

    [[nodiscard]] const std::vector<IndicatorRow> &rows() const noexcept { return rows_; }
    [[nodiscard]] std::optional<double> find(std::string_view indicator, std::string_view group) const;
    [[nodiscard]] std::string to_csv() const;
    static IndicatorTable parse_csv(std::string_view text);

  private:
    std::vector<IndicatorRow> rows_;
};

/// Row labels × column labels grid laid out as a report table. A row
/// with no values is a section heading. NaN cells print empty.
struct Panel {
    std::string corner;
    std::vector<std::string> columns;
    struct Line {
        std::string label;
        std::vector<double> values;
        int decimals = -1; ///< panel default when negative
    };
    std::vector<Line> lines;
    int decimals = 3;

    void heading(std::string label) { lines.push_back({std::move(label), {}, -1}); }
    void row(std::string label, std::vector<double> values, int row_decimals = -1) {
        lines.push_back({std::move(label), std::move(values), row_decimals});
    }
    [[nodiscard]] std::string to_csv() const;
};

/// Fixed-decimal rendering used by panels ("0.365", "-2.500").
std::string format_fixed(double value, int decimals);

} // namespace wsim::ind
