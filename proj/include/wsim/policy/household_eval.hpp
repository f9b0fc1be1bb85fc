#pragma once

#include "wsim/adjusted/adjusted_income.hpp"
#include "wsim/policy/schedule.hpp"
#include "wsim/policy/tax_benefit.hpp"
#include "wsim/population/population.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace wsim::policy {

/// Everything needed to evaluate households under one policy system.
struct PolicyContext {
    const WageSubsidySchedule *cws = nullptr;
    const PupSchedule *pup = nullptr;
    const TaxBenefitParams *params = nullptr;
    double employer_topup_share = 0.6;
    double capital_index_change = 0.0;
    const ChildcareTable *childcare = nullptr;
    std::span<const int> childcare_deciles; ///< per household, 1..10; empty disables childcare costs

    void check() const;
};

/// One person's weekly income under a given status.
struct PersonIncome {
    double labour = 0.0;   ///< gross labour income including any subsidy
    double subsidy = 0.0;  ///< wage subsidy component of labour income
    double pup = 0.0;      ///< unemployment payment
    double market_sources = 0.0;
    double state_pension = 0.0;
    double taxes = 0.0;
    bool in_work = false;

    [[nodiscard]] double employer_pay() const noexcept { return labour - subsidy; }
};

enum class Status { as_observed, cws, pup };

/// Income of one person. Under `cws` gross income is kept at the previous
/// gross (employer top-up), or at the subsidy if that is higher; under `pup`
/// labour income is replaced by the unemployment payment.
PersonIncome evaluate_person(const Person &person, Status status, const PolicyContext &ctx);

struct HouseholdOutcome {
    AdjustedIncomeComponents components;
    double cws = 0.0;
    double pup = 0.0;
    int workers = 0;
};

inline constexpr std::size_t kNoFlip = std::numeric_limits<std::size_t>::max();

/// Household components with members at their observed status (CWS and PUP
/// flags honoured). `flip_to_pup` names a person index moved from work to PUP
/// for the out-of-work counterfactual.
HouseholdOutcome evaluate_household(const PopulationSnapshot &pop, std::size_t household_index,
                                    const PolicyContext &ctx, std::size_t flip_to_pup = kNoFlip);

std::vector<HouseholdOutcome> evaluate_population(const PopulationSnapshot &pop, const PolicyContext &ctx);

/// Net income of a person evaluated alone in their household.
struct NetIncome {
    double gross = 0.0;
    double subsidy = 0.0;
    double employer_pay = 0.0;
    double taxes = 0.0;
    double benefits = 0.0;

    [[nodiscard]] double net() const noexcept { return gross - taxes + benefits; }
};

/// Throws ValidationError when the person is not an employee.
NetIncome net_income_in_work(const Person &person, const Household &household, const WageSubsidySchedule &schedule,
                             const TaxBenefitParams &params, double employer_topup_share = 0.6);
NetIncome net_income_out_of_work(const Person &person, const Household &household, const PupSchedule &schedule,
                                 const TaxBenefitParams &params);

namespace reference {
std::vector<HouseholdOutcome> evaluate_population(const PopulationSnapshot &pop, const PolicyContext &ctx);
} // namespace reference

} // namespace wsim::policy
