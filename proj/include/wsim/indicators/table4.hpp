#pragma once

#include "wsim/indicators/indicator_table.hpp"
#include "wsim/indicators/inequality.hpp"
#include "wsim/policy/household_eval.hpp"
#include "wsim/population/population.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace wsim::ind {

inline constexpr int kTable4Rows = 6;

/// Gini rows (1)-(5) scaled by 100, row (6) raw.
struct Table4Values {
    std::array<double, kTable4Rows> rows{};
    KakwaniConvention convention = KakwaniConvention::concentration_minus_gini;
    std::size_t households = 0;
    std::size_t bottom_coded = 0; ///< negative equivalized incomes set to 0 before the Gini

    [[nodiscard]] IndicatorTable table(const std::string &design) const;
};

std::string_view table4_row_label(int row);

/// Equivalized household vectors entering the panel, one entry per sample household.
struct Table4Inputs {
    std::vector<double> market_excl_cws;
    std::vector<double> gross;
    std::vector<double> adjusted;
    std::vector<double> adjusted_excl_cws;
    std::vector<double> cws;
    std::vector<double> weights;
};

/// Households with at least one CWS recipient. `outcomes` are as-observed
/// household outcomes, one per household.
Table4Inputs table4_inputs(const PopulationSnapshot &pop, std::span<const policy::HouseholdOutcome> outcomes);

/// Row (5) is computed as row (4) - row (3) on the scaled values. Row (6)
/// is NaN when no CWS is paid in the sample.
Table4Values table4_panel(const Table4Inputs &inputs, KakwaniConvention convention);
Table4Values table4_panel(const PopulationSnapshot &pop, std::span<const policy::HouseholdOutcome> outcomes,
                          KakwaniConvention convention);

/// Single-wave layout when values has one wave, wave-by-wave sections
/// otherwise. values[w][d].
Panel table4(std::span<const std::vector<Table4Values>> values, std::span<const std::string> column_labels);

} // namespace wsim::ind
