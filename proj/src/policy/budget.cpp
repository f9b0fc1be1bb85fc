#include "wsim/policy/budget.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"
#include "wsim/policy/household_eval.hpp"

#include <cmath>
#include <sstream>

namespace wsim::policy {

BudgetConstraintCurve budget_constraint(const WageSubsidySchedule &schedule, const PupSchedule &pup_schedule,
                                        const TaxBenefitParams &params, std::span<const double> grid,
                                        double employer_topup_share, int children) {
    if (grid.empty()) throw ValidationError("budget constraint grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) throw ValidationError("grid points must be finite and >= 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("grid must be strictly increasing");
    }
    if (children < 0) throw ValidationError("children must be >= 0");

    BudgetConstraintCurve curve;
    curve.cws_id = schedule.id;
    curve.pup_id = pup_schedule.id;
    curve.children = children;
    curve.employer_topup_share = employer_topup_share;

    Household hh;
    hh.id = 1;
    hh.n_adults = 1;
    hh.n_children = children;
    for (double g : grid) {
        Person p;
        p.id = 1;
        p.age = 40;
        p.labour_state = LabourState::employee;
        p.gross_earnings = g;
        p.prev_gross_earnings = g;
        p.prev_net_earnings = std::min(g, net_pay(g, params));
        const auto in = net_income_in_work(p, hh, schedule, params, employer_topup_share);
        const auto out = net_income_out_of_work(p, hh, pup_schedule, params);
        BudgetPoint pt;
        pt.prev_gross = g;
        pt.prev_net = p.prev_net_earnings;
        pt.subsidy = in.subsidy;
        pt.employer_pay = in.employer_pay;
        pt.net_in_work = in.net();
        pt.net_out_of_work = out.net();
        pt.pup = out.gross;
        pt.wfp = working_family_payment(children, true, Cents::from_euros(in.gross), params).euros();
        curve.points.push_back(pt);
    }
    return curve;
}

std::vector<double> make_grid(double from, double to, double step) {
    if (!(step > 0.0) || !(to >= from)) throw ValidationError("invalid grid specification");
    std::vector<double> out;
    const auto n = static_cast<long long>(std::floor((to - from) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(std::round((from + static_cast<double>(i) * step) * 100.0) / 100.0);
    return out;
}

std::string format_curve_csv(const BudgetConstraintCurve &curve) {
    std::ostringstream out;
    csv::write_row(out, {"prev_gross", "prev_net", "subsidy", "employer_pay", "net_in_work", "pup", "net_out_of_work",
                         "wfp"});
    auto f = [](double v) { return csv::format_double(std::round(v * 100.0) / 100.0); };
    for (const auto &p : curve.points)
        csv::write_row(out, {f(p.prev_gross), f(p.prev_net), f(p.subsidy), f(p.employer_pay), f(p.net_in_work), f(p.pup),
                             f(p.net_out_of_work), f(p.wfp)});
    return out.str();
}

} // namespace wsim::policy
