#pragma once

#include "wsim/igm/models.hpp"
#include "wsim/policy/tax_benefit.hpp"
#include "wsim/population/control_totals.hpp"
#include "wsim/population/population.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wsim {

struct EstimationOptions {
    std::size_t sample_cap = 40000; ///< persons used to fit each equation
    igm::FitOptions fit;
};

/// Income-generation model fitted on the base population.
struct LabourMarketModels {
    igm::BinaryModelParams in_work;    ///< adults
    igm::BinaryModelParams employee;   ///< adults in work
    igm::BinaryModelParams unemployed; ///< adults out of work, not retired
    igm::MultinomialModelParams industry;
    igm::MultinomialModelParams occupation;
    igm::LevelModelParams earnings; ///< log weekly gross earnings of workers
    igm::ResidualStore earnings_residuals;
    std::vector<std::string> warnings;
};

LabourMarketModels estimate_models(const PopulationSnapshot &base, std::uint64_t seed,
                                   const EstimationOptions &options = {});

struct LabourMarketOptions {
    double cws_earnings_ceiling = 1462.0; ///< previous gross pay must be below this
};

/// Units whose aligned outcome differs from the unaligned simulation.
struct LabourMarketStats {
    std::size_t in_work_changed = 0;
    std::size_t unemployed_changed = 0;
    std::size_t industry_changed = 0;
    std::size_t occupation_changed = 0;
    std::size_t entrants = 0;
    std::size_t job_losers = 0;
    std::size_t cws_recipients = 0;
    std::size_t pup_recipients = 0;
};

struct StageResult {
    PopulationSnapshot population;
    LabourMarketStats stats;
    std::vector<std::string> warnings;
};

/// Stage 1: re-simulates labour-market status, industry, occupation and
/// earnings aligned to the control totals, then assigns CWS take-up among
/// eligible employees and PUP among the unemployed, per industry.
StageResult simulate_labour_market(const PopulationSnapshot &base, const LabourMarketModels &models,
                                   const ControlTotals &totals, const policy::TaxBenefitParams &params,
                                   std::uint64_t seed, const LabourMarketOptions &options = {});

struct PriceOptions {
    double capital_yield = 0.04;
};

/// Stage 2: indexes earnings by (industry, occupation), aligns mean
/// earnings when a target is set and re-draws share holders by age band and
/// household income quintile when holding rates are given.
StageResult index_returns_and_prices(const PopulationSnapshot &pop, const ControlTotals &totals,
                                     const policy::TaxBenefitParams &params, std::uint64_t seed,
                                     const PriceOptions &options = {});

} // namespace wsim
