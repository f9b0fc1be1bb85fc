#include "wsim/policy/household_eval.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/parallel.hpp"

#include <algorithm>

namespace wsim::policy {

void PolicyContext::check() const {
    if (!cws || !pup || !params) throw ConfigError("policy context needs CWS and PUP schedules and tax-benefit parameters");
    if (!(employer_topup_share >= 0.0 && employer_topup_share <= 1.0))
        throw ConfigError("employer top-up share must lie in [0, 1]");
    if (!childcare_deciles.empty() && !childcare) throw ConfigError("childcare deciles given without a childcare table");
}

PersonIncome evaluate_person(const Person &person, Status status, const PolicyContext &ctx) {
    const auto &params = *ctx.params;
    if (status == Status::as_observed) {
        if (person.receives_cws)
            status = Status::cws;
        else if (person.receives_pup)
            status = Status::pup;
    }
    PersonIncome r;
    for (std::size_t s = 0; s < kIncomeSourceCount; ++s) {
        const auto &src = person.income_sources[s];
        if (!src.present) continue;
        if (static_cast<IncomeSource>(s) == IncomeSource::state_pension)
            r.state_pension += src.level;
        else
            r.market_sources += src.level;
    }

    Cents taxable = Cents::from_euros(r.market_sources + r.state_pension);
    switch (status) {
    case Status::cws: {
        const Cents gross = Cents::from_euros(person.prev_gross_earnings);
        const Cents subsidy = cws_payment(*ctx.cws, gross, Cents::from_euros(person.prev_net_earnings),
                                          ctx.employer_topup_share);
        const Cents labour = max(gross, subsidy);
        r.labour = labour.euros();
        r.subsidy = subsidy.euros();
        r.in_work = true;
        taxable += ctx.cws->taxable ? labour : labour - subsidy;
        break;
    }
    case Status::pup: {
        const Cents pup = pup_payment(*ctx.pup, Cents::from_euros(person.prev_gross_earnings));
        r.pup = pup.euros();
        if (ctx.pup->taxable) taxable += pup;
        break;
    }
    case Status::as_observed:
        r.labour = person.gross_earnings;
        r.in_work = person.in_work();
        taxable += Cents::from_euros(person.gross_earnings);
        break;
    }
    r.taxes = baseline_tax(taxable, person, params).total().euros();
    return r;
}

HouseholdOutcome evaluate_household(const PopulationSnapshot &pop, std::size_t h, const PolicyContext &ctx,
                                    std::size_t flip_to_pup) {
    const auto &hh = pop.households()[h];
    const auto persons = pop.persons();
    HouseholdOutcome out;
    auto &c = out.components;
    double family_labour = 0.0;
    int adults_in_work = 0;
    for (auto idx : pop.member_indices(h)) {
        const auto &p = persons[idx];
        const auto r = evaluate_person(p, idx == flip_to_pup ? Status::pup : Status::as_observed, ctx);
        c.market += r.labour + r.market_sources;
        c.benefits += r.state_pension + r.pup;
        c.taxes += r.taxes;
        out.cws += r.subsidy;
        out.pup += r.pup;
        family_labour += r.labour;
        if (r.in_work) {
            ++out.workers;
            if (!p.is_child()) ++adults_in_work;
        }
    }
    const auto benefits =
        baseline_benefits(hh, out.workers > 0, Cents::from_euros(family_labour), *ctx.params);
    c.benefits += benefits.total().euros();
    c.housing = hh.mortgage_deferral ? 0.0 : hh.housing_cost;
    c.capital_loss = capital_loss(hh.capital_value, ctx.capital_index_change);
    c.commuting = commuting_cost(out.workers);
    // Childcare is a work-related cost only while every adult works.
    if (!ctx.childcare_deciles.empty() && adults_in_work == hh.n_adults)
        c.childcare = childcare_cost(hh, ctx.childcare_deciles[h], *ctx.childcare);
    c.divisor = equivalence_divisor(hh.size());
    return out;
}

std::vector<HouseholdOutcome> evaluate_population(const PopulationSnapshot &pop, const PolicyContext &ctx) {
    ctx.check();
    const auto n = pop.households().size();
    if (!ctx.childcare_deciles.empty() && ctx.childcare_deciles.size() != n)
        throw ValidationError("childcare deciles must be given per household");
    std::vector<HouseholdOutcome> out(n);
    parallel::for_each_index(n, [&](std::size_t h) { out[h] = evaluate_household(pop, h, ctx); });
    return out;
}

NetIncome net_income_in_work(const Person &person, const Household &household, const WageSubsidySchedule &schedule,
                             const TaxBenefitParams &params, double employer_topup_share) {
    if (person.labour_state != LabourState::employee)
        throw ValidationError("person " + std::to_string(person.id) + " is not an employee and cannot receive CWS");
    PolicyContext ctx;
    ctx.cws = &schedule;
    ctx.params = &params;
    ctx.employer_topup_share = employer_topup_share;
    PupSchedule none;
    ctx.pup = &none;
    const auto r = evaluate_person(person, Status::cws, ctx);
    NetIncome n;
    n.gross = r.labour + r.market_sources;
    n.subsidy = r.subsidy;
    n.employer_pay = r.employer_pay();
    n.taxes = r.taxes;
    n.benefits = r.state_pension + baseline_benefits(household, true, Cents::from_euros(r.labour), params).total().euros();
    return n;
}

NetIncome net_income_out_of_work(const Person &person, const Household &household, const PupSchedule &schedule,
                                 const TaxBenefitParams &params) {
    PolicyContext ctx;
    ctx.pup = &schedule;
    ctx.params = &params;
    const auto r = evaluate_person(person, Status::pup, ctx);
    NetIncome n;
    n.gross = r.pup + r.market_sources;
    n.taxes = r.taxes;
    n.benefits = r.state_pension + baseline_benefits(household, false, Cents{0}, params).total().euros();
    return n;
}

namespace reference {

std::vector<HouseholdOutcome> evaluate_population(const PopulationSnapshot &pop, const PolicyContext &ctx) {
    ctx.check();
    std::vector<HouseholdOutcome> out;
    out.reserve(pop.households().size());
    for (std::size_t h = 0; h < pop.households().size(); ++h) out.push_back(evaluate_household(pop, h, ctx));
    return out;
}

} // namespace reference

} // namespace wsim::policy
