#pragma once

#include "wsim/population/population.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace wsim {

/// Distribution parameters for the synthetic population generator.
/// Probability vectors need not be normalised but must be non-negative
/// with a positive sum.
struct SyntheticSpec {
    /// P(household size = i + 1).
    std::vector<double> household_size_probs{0.24, 0.29, 0.17, 0.17, 0.09, 0.04};
    double couple_prob = 0.75;       ///< second member is an adult
    double extra_child_prob = 0.85;  ///< members beyond the second are children
    /// Adult age band weights: 18-24, 25-34, 35-44, 45-54, 55-64, 65-84.
    std::array<double, 6> adult_age_band_probs{0.11, 0.17, 0.20, 0.18, 0.15, 0.19};
    std::array<double, 3> education_probs{0.25, 0.40, 0.35};

    int retirement_age = 66;
    std::array<double, 2> employment_rate{0.74, 0.64}; ///< by gender, adults below retirement age
    double elderly_employment_rate = 0.10;
    double unemployed_share = 0.12; ///< of working-age adults not in work
    double employee_share = 0.85;   ///< of persons in work
    double public_share = 0.20;
    double temporary_share = 0.10;
    std::vector<double> industry_probs{0.05, 0.12, 0.07, 0.15, 0.07, 0.04, 0.05, 0.08, 0.09, 0.06, 0.13, 0.09};
    std::vector<double> occupation_probs{0.09, 0.18, 0.13, 0.11, 0.14, 0.10, 0.08, 0.09, 0.08};

    /// Weekly gross earnings ~ lognormal(mu + effects, sigma).
    double earnings_mu = 6.3297;
    double earnings_sigma = 0.7476;
    std::array<double, 3> education_log_effect{-0.15, 0.0, 0.20};
    double female_log_effect = -0.10;
    double net_ratio = 0.82; ///< previous net pay / gross when no net-pay function is supplied

    double capital_prob = 0.12;
    double capital_mu = 3.0;
    double capital_sigma = 1.0;
    double capital_yield = 0.04; ///< annual return linking capital income to capital value
    double private_pension_prob = 0.45;
    double private_pension_mu = 5.5;
    double private_pension_sigma = 0.5;
    double state_pension_prob = 0.92;
    double state_pension_amount = 248.30;
    double other_income_prob = 0.04;
    double other_income_mu = 4.4;
    double other_income_sigma = 0.7;

    std::array<double, 3> commute_probs{0.10, 0.70, 0.20}; ///< none, car, public, for persons in work
    double housing_zero_prob = 0.35;
    double housing_mu = 5.2;
    double housing_sigma = 0.45;
    double childcare_prob = 0.40; ///< households with a child under 13

    /// Throws ConfigError describing the first invalid field.
    void validate() const;
};

using NetPayFn = std::function<double(double gross)>;

/// Generates exactly n persons grouped into households. The result is a pure
/// function of (spec, n, seed, net_pay).
PopulationSnapshot generate_synthetic(const SyntheticSpec &spec, std::size_t n, std::uint64_t seed,
                                      const NetPayFn &net_pay = {});

} // namespace wsim
