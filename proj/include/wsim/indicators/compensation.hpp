#pragma once

#include "wsim/indicators/indicator_table.hpp"
#include "wsim/policy/schedule.hpp"
#include "wsim/policy/tax_benefit.hpp"
#include "wsim/population/person.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace wsim::ind {

/// Lognormal distribution of weekly worker earnings.
struct WorkerDistribution {
    double mu = 0.0;
    double sigma = 1.0;

    /// Passes through (x1, p1) and (x2, p2) on the CDF. Throws ConfigError
    /// unless 0 < x1 < x2 and 0 < p1 < p2 < 1.
    static WorkerDistribution from_quantiles(double x1, double p1, double x2, double p2);

    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] double mean() const;
};

/// 4% of workers below €151.50 and 10% above €1462 a week.
WorkerDistribution default_worker_distribution();

struct CompensationOptions {
    double upper = 1462.0;     ///< eligibility ceiling, exclusive
    double grid_step = 0.01;
    double employer_topup_share = 0.6;
    WorkerDistribution workers = default_worker_distribution();
};

struct CompensationPanel {
    std::string design;
    double lower = 0.0; ///< first grid point with a positive payment
    double upper = 0.0;
    std::array<double, 11> bounds{};
    std::array<double, 10> decile{};      ///< mean capped CR over the decile's grid points
    std::array<std::size_t, 10> points{}; ///< grid points per decile
    double average = 0.0;                 ///< CR at mean worker earnings
    double average_decile_weighted = 0.0; ///< worker-share weighted mean of decile CRs
    std::size_t excluded_zero = 0;        ///< grid points with zero earnings

    [[nodiscard]] double bottom() const noexcept { return decile[0]; }
    [[nodiscard]] double median() const noexcept { return decile[5]; }
    [[nodiscard]] double top() const noexcept { return decile[9]; }
    [[nodiscard]] IndicatorTable table() const;
};

/// min(1, payment / prev_gross) for one earner; prev_net from the tax rules.
double compensation_rate(const policy::WageSubsidySchedule &schedule, double prev_gross,
                         const policy::TaxBenefitParams &params, double employer_topup_share = 0.6);

/// Compensation-rate panel over a uniform earnings grid spanning the
/// eligible range. Decile bounds are worker-distribution quantiles
/// restricted to the range; each grid point carries equal weight inside its
/// decile. Throws ValidationError when the schedule pays nothing below the
/// ceiling.
CompensationPanel compensation_panel(const policy::WageSubsidySchedule &schedule, const policy::TaxBenefitParams &params,
                                     const CompensationOptions &options = {});

/// Panel over observed recipients: deciles of prev_gross, weighted averages.
/// Recipients with zero previous earnings are skipped and counted.
CompensationPanel compensation_panel(const policy::WageSubsidySchedule &schedule, std::span<const Person> recipients, std::span<const double> weights,
                                     double employer_topup_share = 0.6);

/// Bottom / Median / Top / Average rows, one column per design.
Panel table1(std::span<const CompensationPanel> panels, std::span<const std::string> column_labels = {});

} // namespace wsim::ind
