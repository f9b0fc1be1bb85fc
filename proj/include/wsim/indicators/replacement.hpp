#pragma once

#include "wsim/indicators/indicator_table.hpp"
#include "wsim/policy/household_eval.hpp"
#include "wsim/population/population.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace wsim::ind {

/// One CWS recipient under both counterfactuals.
struct RecipientOutcome {
    std::size_t person = 0;
    std::size_t household = 0;
    double cws = 0.0;         ///< recipient's subsidy payment
    double pup = 0.0;         ///< payment the recipient would get out of work
    double in_work = 0.0;     ///< equivalized adjusted household income, recipient on CWS
    double out_of_work = 0.0; ///< same with the recipient moved to PUP
    double weight = 1.0;      ///< household weight
};

/// Evaluates every person flagged as a CWS recipient. `baseline` holds the
/// as-observed household outcomes under `ctx` (one per household).
std::vector<RecipientOutcome> recipient_outcomes(const PopulationSnapshot &pop, const policy::PolicyContext &ctx,
                                                 std::span<const policy::HouseholdOutcome> baseline);

struct NetReplacementPanel {
    std::array<double, 10> decile{}; ///< weighted mean RR_net by decile of in-work income
    double average = 0.0;
    std::size_t recipients = 0;
    std::size_t excluded = 0; ///< nonpositive in-work income

    [[nodiscard]] IndicatorTable table(const std::string &design) const;
};

/// CWS payment / equivalized adjusted household income per recipient.
double net_replacement_rate(const RecipientOutcome &r);
NetReplacementPanel net_replacement_panel(std::span<const RecipientOutcome> recipients);

inline constexpr int kRrBins = 20; ///< 0.1-wide bins over [0, 2)

struct RelativeReplacementBands {
    double band_70_89 = 0.0; ///< shares of included recipients, [0.7, 0.9)
    double band_90_99 = 0.0; ///< [0.9, 1.0)
    double band_100 = 0.0;   ///< [1.0, inf)
    double below_0 = 0.0;
    std::array<double, kRrBins> bins{};
    double above_2 = 0.0;
    std::size_t recipients = 0;
    std::size_t excluded = 0; ///< nonpositive in-work income

    [[nodiscard]] double total() const noexcept { return band_70_89 + band_90_99 + band_100; }
    [[nodiscard]] IndicatorTable table(const std::string &design) const;
};

/// Out-of-work / in-work equivalized adjusted income.
double relative_replacement_rate(const RecipientOutcome &r);
RelativeReplacementBands relative_replacement_bands(std::span<const RecipientOutcome> recipients);

/// Bottom, 3rd, Median, 7th, Top, Average in percent.
Panel table2(std::span<const NetReplacementPanel> panels, std::span<const std::string> column_labels);
/// 70-89, 90-99, >= 100, Total in percent.
Panel table3(std::span<const RelativeReplacementBands> bands, std::span<const std::string> column_labels);
/// Per wave: shares with RR_rel >= 1 and >= 0.7, in percent. bands[w][d].
Panel table7(std::span<const std::vector<RelativeReplacementBands>> bands, std::span<const std::string> column_labels);

std::string wave_label(std::size_t index);

} // namespace wsim::ind
