#pragma once

#include "wsim/population/person.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wsim {

inline constexpr int kIncomeQuintiles = 5;

/// External calibration targets for one period. Share tables are normalised
/// to sum to 1; counts refer to `reference_population` persons and are scaled
/// to the simulated population by `scale(n)`.
struct ControlTotals {
    std::string period;
    double reference_population = 0.0;
    double in_work_total = 0.0;
    double unemployed_total = 0.0;
    double capital_index_change = 0.0; ///< fractional change, e.g. -0.10
    std::optional<double> mean_earnings_target;

    /// [age band][gender], sums to 1 over all cells.
    std::array<std::array<double, 2>, kAgeBandCount> in_work_share{};
    /// (industry, occupation, gender) -> share; sums to 1.
    std::map<std::array<int, 3>, double> employment_share;
    std::array<double, 2> unemployment_share{};
    std::map<int, double> cws_takeup; ///< industry -> recipients
    std::map<int, double> pup_takeup; ///< industry -> recipients
    std::map<std::pair<int, int>, double> earnings_index; ///< (industry, occupation) -> factor
    std::array<double, kAgeBandCount> holding_rate_by_age{};
    std::array<double, kIncomeQuintiles> holding_rate_by_quintile{};
    bool has_holding_rates = false;

    [[nodiscard]] double scale(std::size_t n) const {
        return reference_population > 0.0 ? static_cast<double>(n) / reference_population : 0.0;
    }
    /// Industry distribution of employment for one gender, normalised.
    [[nodiscard]] std::map<int, double> industry_share(Gender g) const;
    [[nodiscard]] std::map<int, double> occupation_share(Gender g) const;
};

ControlTotals load_control_totals(const std::filesystem::path &path);
ControlTotals parse_control_totals(std::string_view text);
std::string format_control_totals(const ControlTotals &totals);

} // namespace wsim
