#pragma once

#include "wsim/policy/schedule.hpp"
#include "wsim/policy/tax_benefit.hpp"

#include <span>
#include <string>
#include <vector>

namespace wsim::policy {

struct BudgetPoint {
    double prev_gross = 0.0;
    double prev_net = 0.0;
    double subsidy = 0.0;
    double employer_pay = 0.0;
    double net_in_work = 0.0;
    double net_out_of_work = 0.0;
    double pup = 0.0;
    double wfp = 0.0; ///< working family payment in work
};

struct BudgetConstraintCurve {
    std::string cws_id;
    std::string pup_id;
    int children = 0;
    double employer_topup_share = 0.0;
    std::vector<BudgetPoint> points;
};

/// Evaluates a stylized single adult (with `children` children) at every
/// previous-gross grid point. Throws ValidationError unless the grid is
/// strictly increasing and non-negative.
BudgetConstraintCurve budget_constraint(const WageSubsidySchedule &schedule, const PupSchedule &pup_schedule,
                                        const TaxBenefitParams &params, std::span<const double> grid,
                                        double employer_topup_share = 0.6, int children = 0);

/// Evenly spaced grid [from, to] with the given step.
std::vector<double> make_grid(double from, double to, double step);

std::string format_curve_csv(const BudgetConstraintCurve &curve);

} // namespace wsim::policy
