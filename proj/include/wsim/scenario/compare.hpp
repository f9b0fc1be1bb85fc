#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wsim {

struct IndicatorDelta {
    std::string indicator;
    std::string group;
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;
    std::string flag; ///< sign change or direction of band-share movement, empty otherwise
};

struct CompareReport {
    std::vector<IndicatorDelta> rows;
    std::size_t flagged = 0;

    [[nodiscard]] std::string to_csv() const;
};

/// Per-indicator deltas between two bundles (b - a). RS rows whose sign
/// differs are flagged "sign_change"; band-share rows that move are flagged
/// "up" or "down". Throws ValidationError when the bundles were built on
/// different base populations or seeds.
CompareReport compare_runs(const std::filesystem::path &a, const std::filesystem::path &b);

} // namespace wsim
