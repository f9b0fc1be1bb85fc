#pragma once

#include "wsim/core/money.hpp"
#include "wsim/population/person.hpp"

#include <json.hpp>

#include <filesystem>
#include <limits>
#include <vector>

namespace wsim::policy {

struct RateBand {
    double upper = std::numeric_limits<double>::infinity(); ///< euros/week, exclusive
    double rate = 0.0;
};

/// Simplified weekly tax-benefit system. All amounts in euros per week.
struct TaxBenefitParams {
    std::vector<RateBand> income_tax_bands{{679.0, 0.20}, {std::numeric_limits<double>::infinity(), 0.40}};
    double tax_credit = 63.46;
    double social_insurance_rate = 0.04;
    double social_insurance_threshold = 352.0; ///< whole income charged once above
    int pension_age = 66;                      ///< social insurance exemption
    std::vector<RateBand> social_charge_bands{
        {231.0, 0.005}, {394.0, 0.02}, {1347.0, 0.045}, {std::numeric_limits<double>::infinity(), 0.08}};
    double child_benefit = 32.31; ///< per child
    std::vector<double> wfp_max_payment{153.0, 184.0, 215.0, 250.0}; ///< by number of children, 1-based
    double wfp_max_increment = 36.0;
    std::vector<double> wfp_threshold{256.0, 305.0, 355.0, 417.0};
    double wfp_threshold_increment = 60.0;
    double wfp_withdrawal_rate = 0.60;
    double indexation = 1.0; ///< multiplies benefit amounts

    /// Throws ConfigError when a rate leaves [0, 1] or band cutoffs do not increase.
    void validate() const;
    [[nodiscard]] double wfp_max_for(int children) const;
    [[nodiscard]] double wfp_threshold_for(int children) const;
};

struct TaxResult {
    Cents income_tax{};
    Cents social_insurance{};
    Cents social_charge{};

    [[nodiscard]] Cents total() const noexcept { return income_tax + social_insurance + social_charge; }
};

/// Banded tax on a weekly amount, before credits.
Cents banded_tax(Cents income, const std::vector<RateBand> &bands);

/// Taxes on one person's weekly taxable income.
TaxResult baseline_tax(Cents gross, int age, const TaxBenefitParams &params);
TaxResult baseline_tax(Cents gross, const Person &person, const TaxBenefitParams &params);

/// Net pay of a working-age single earner.
Cents net_pay(Cents gross, const TaxBenefitParams &params);
double net_pay(double gross, const TaxBenefitParams &params);

struct BenefitResult {
    Cents child_benefit{};
    Cents working_family_payment{};

    [[nodiscard]] Cents total() const noexcept { return child_benefit + working_family_payment; }
};

Cents working_family_payment(int children, bool in_work, Cents family_income, const TaxBenefitParams &params);

/// Child benefit for every child plus the working family payment for households
/// with children and a member in work, tested on family labour income.
BenefitResult baseline_benefits(const Household &household, bool any_in_work, Cents family_income,
                                const TaxBenefitParams &params);

TaxBenefitParams tax_benefit_from_json(const nlohmann::json &j);
nlohmann::json to_json(const TaxBenefitParams &p);
TaxBenefitParams load_tax_benefit(const std::filesystem::path &path);

} // namespace wsim::policy
