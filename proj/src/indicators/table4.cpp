#include "wsim/indicators/table4.hpp"
#include "wsim/core/error.hpp"
#include "wsim/indicators/replacement.hpp"

#include <algorithm>
#include <cmath>

namespace wsim::ind {

namespace {

constexpr std::array<std::string_view, kTable4Rows> kLabels{
    "(1) Gini in Market income (excl. CWS)",
    "(2) Gini in Gross income ((1) + benefits, incl. CWS & PUP)",
    "(3) Gini in Adjusted disposable income ((2) – taxes – work related costs)",
    "(4) Gini in Adjusted disposable income without CWS ((3) – CWS)",
    "(5) Benefit redistribution (RS) ((4) – (3))",
    "(6) Benefit Regressivity (K)",
};

double gini_or_nan(std::span<const double> v, std::span<const double> w) {
    if (v.empty() || std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) return std::nan("");
    return gini(v, w);
}

std::vector<double> bottom_code(std::span<const double> v, std::size_t &count) {
    std::vector<double> out(v.begin(), v.end());
    for (auto &x : out)
        if (x < 0.0) {
            x = 0.0;
            ++count;
        }
    return out;
}

} // namespace

std::string_view table4_row_label(int row) {
    if (row < 1 || row > kTable4Rows) throw ValidationError("table 4 rows are numbered 1 to 6");
    return kLabels[static_cast<std::size_t>(row - 1)];
}

Table4Inputs table4_inputs(const PopulationSnapshot &pop, std::span<const policy::HouseholdOutcome> outcomes) {
    if (outcomes.size() != pop.households().size()) throw ValidationError("outcomes must cover every household");
    const auto persons = pop.persons();
    Table4Inputs in;
    for (std::size_t h = 0; h < outcomes.size(); ++h) {
        const auto members = pop.member_indices(h);
        if (std::none_of(members.begin(), members.end(), [&](std::size_t i) { return persons[i].receives_cws; }))
            continue;
        const auto &o = outcomes[h];
        const auto &c = o.components;
        in.market_excl_cws.push_back((c.market - o.cws) / c.divisor);
        in.gross.push_back((c.market + c.benefits) / c.divisor);
        in.adjusted.push_back(c.equivalized());
        in.adjusted_excl_cws.push_back((c.adjusted() - o.cws) / c.divisor);
        in.cws.push_back(o.cws / c.divisor);
        in.weights.push_back(pop.households()[h].weight);
    }
    return in;
}

Table4Values table4_panel(const Table4Inputs &in, KakwaniConvention convention) {
    Table4Values v;
    v.convention = convention;
    v.households = in.weights.size();
    const auto m = bottom_code(in.market_excl_cws, v.bottom_coded);
    const auto g = bottom_code(in.gross, v.bottom_coded);
    const auto a = bottom_code(in.adjusted, v.bottom_coded);
    const auto a0 = bottom_code(in.adjusted_excl_cws, v.bottom_coded);
    v.rows[0] = 100.0 * gini_or_nan(m, in.weights);
    v.rows[1] = 100.0 * gini_or_nan(g, in.weights);
    v.rows[2] = 100.0 * gini_or_nan(a, in.weights);
    v.rows[3] = 100.0 * gini_or_nan(a0, in.weights);
    v.rows[4] = v.rows[3] - v.rows[2];
    const bool any_cws = std::any_of(in.cws.begin(), in.cws.end(), [](double x) { return x != 0.0; });
    v.rows[5] = any_cws && !std::isnan(v.rows[0]) ? kakwani(in.cws, m, convention, in.weights).value : std::nan("");
    return v;
}

Table4Values table4_panel(const PopulationSnapshot &pop, std::span<const policy::HouseholdOutcome> outcomes,
                          KakwaniConvention convention) {
    return table4_panel(table4_inputs(pop, outcomes), convention);
}

IndicatorTable Table4Values::table(const std::string &design) const {
    IndicatorTable t;
    const std::string ind = "table4:" + design;
    const std::string note = "households with a CWS recipient, household-weighted, x100";
    for (int r = 0; r < 5; ++r) t.add(ind, "row_" + std::to_string(r + 1), rows[static_cast<std::size_t>(r)], note);
    t.add(ind, "row_6", rows[5], "Kakwani " + std::string(to_string(convention)) + " vs market income excl. CWS");
    t.add(ind, "households", static_cast<double>(households), "");
    t.add(ind, "bottom_coded", static_cast<double>(bottom_coded), "negative incomes set to 0");
    return t;
}

Panel table4(std::span<const std::vector<Table4Values>> values, std::span<const std::string> column_labels) {
    Panel t;
    t.corner = "Gini";
    t.columns.assign(column_labels.begin(), column_labels.end());
    t.decimals = 1;
    for (const auto &wave : values)
        if (wave.size() != column_labels.size()) throw ValidationError("one column label per design required");
    for (int r = 0; r < kTable4Rows; ++r) {
        const int decimals = r == 5 ? 2 : 1;
        auto pick = [&](const std::vector<Table4Values> &wave) {
            std::vector<double> v;
            for (const auto &x : wave) v.push_back(x.rows[static_cast<std::size_t>(r)]);
            return v;
        };
        if (values.size() == 1) {
            t.row(std::string(kLabels[static_cast<std::size_t>(r)]), pick(values[0]), decimals);
            continue;
        }
        t.heading(std::string(kLabels[static_cast<std::size_t>(r)]));
        for (std::size_t w = 0; w < values.size(); ++w) t.row(wave_label(w), pick(values[w]), decimals);
    }
    return t;
}

} // namespace wsim::ind
