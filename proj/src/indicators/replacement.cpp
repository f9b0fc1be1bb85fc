#include "wsim/indicators/replacement.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/parallel.hpp"
#include "wsim/indicators/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wsim::ind {

std::vector<RecipientOutcome> recipient_outcomes(const PopulationSnapshot &pop, const policy::PolicyContext &ctx,
                                                 std::span<const policy::HouseholdOutcome> baseline) {
    ctx.check();
    if (baseline.size() != pop.households().size()) throw ValidationError("baseline outcomes must cover every household");
    const auto persons = pop.persons();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < persons.size(); ++i)
        if (persons[i].receives_cws) idx.push_back(i);
    std::vector<RecipientOutcome> out(idx.size());
    parallel::for_each_index(idx.size(), [&](std::size_t k) {
        const auto i = idx[k];
        const auto h = pop.household_index_of(i);
        auto &r = out[k];
        r.person = i;
        r.household = h;
        r.cws = policy::evaluate_person(persons[i], policy::Status::cws, ctx).subsidy;
        r.in_work = baseline[h].components.equivalized();
        const auto flipped = policy::evaluate_household(pop, h, ctx, i);
        r.out_of_work = flipped.components.equivalized();
        r.pup = policy::evaluate_person(persons[i], policy::Status::pup, ctx).pup;
        r.weight = pop.households()[h].weight;
    });
    return out;
}

double net_replacement_rate(const RecipientOutcome &r) {
    if (!(r.in_work > 0.0)) throw ValidationError("net replacement rate needs positive in-work income");
    return r.cws / r.in_work;
}

double relative_replacement_rate(const RecipientOutcome &r) {
    if (!(r.in_work > 0.0)) throw ValidationError("relative replacement rate needs positive in-work income");
    return r.out_of_work / r.in_work;
}

NetReplacementPanel net_replacement_panel(std::span<const RecipientOutcome> recipients) {
    NetReplacementPanel p;
    std::vector<double> income, rate, w;
    for (const auto &r : recipients) {
        if (!(r.in_work > 0.0)) {
            ++p.excluded;
            continue;
        }
        income.push_back(r.in_work);
        rate.push_back(net_replacement_rate(r));
        w.push_back(r.weight);
    }
    p.recipients = rate.size();
    if (rate.empty()) {
        p.decile.fill(std::nan(""));
        p.average = std::nan("");
        return p;
    }
    const auto groups = decile_groups(income, w);
    const auto means = group_means(rate, groups, w, 10);
    std::copy(means.begin(), means.end(), p.decile.begin());
    double acc = 0.0, total = 0.0;
    for (std::size_t i = 0; i < rate.size(); ++i) {
        acc += w[i] * rate[i];
        total += w[i];
    }
    p.average = acc / total;
    return p;
}

RelativeReplacementBands relative_replacement_bands(std::span<const RecipientOutcome> recipients) {
    RelativeReplacementBands b;
    double total = 0.0;
    for (const auto &r : recipients) {
        if (!(r.in_work > 0.0)) {
            ++b.excluded;
            continue;
        }
        ++b.recipients;
        const double rr = relative_replacement_rate(r);
        const double w = r.weight;
        total += w;
        if (rr >= 1.0)
            b.band_100 += w;
        else if (rr >= 0.9)
            b.band_90_99 += w;
        else if (rr >= 0.7)
            b.band_70_89 += w;
        if (rr < 0.0)
            b.below_0 += w;
        else if (rr >= 2.0)
            b.above_2 += w;
        else
            b.bins[static_cast<std::size_t>(std::min(kRrBins - 1, static_cast<int>(std::floor(rr * 10.0))))] += w;
    }
    if (total > 0.0) {
        for (double *v : {&b.band_70_89, &b.band_90_99, &b.band_100, &b.below_0, &b.above_2}) *v /= total;
        for (auto &v : b.bins) v /= total;
    }
    return b;
}

IndicatorTable NetReplacementPanel::table(const std::string &design) const {
    IndicatorTable t;
    const std::string ind = "rr_net:" + design;
    const std::string note = "household-weighted; deciles of equivalized adjusted income among recipients";
    for (std::size_t k = 0; k < 10; ++k) t.add(ind, "decile_" + std::to_string(k + 1), decile[k], note);
    t.add(ind, "average", average, "household-weighted mean over recipients");
    t.add(ind, "recipients", static_cast<double>(recipients), "");
    t.add(ind, "excluded_nonpositive_income", static_cast<double>(excluded), "");
    return t;
}

IndicatorTable RelativeReplacementBands::table(const std::string &design) const {
    IndicatorTable t;
    const std::string ind = "rr_rel:" + design;
    const std::string note = "share of recipients, household-weighted";
    t.add(ind, "70-89", band_70_89, note);
    t.add(ind, "90-99", band_90_99, note);
    t.add(ind, ">=100", band_100, note);
    t.add(ind, "total", total(), note);
    t.add(ind, "<0", below_0, "full distribution");
    for (int k = 0; k < kRrBins; ++k) {
        char label[32];
        std::snprintf(label, sizeof label, "[%.1f,%.1f)", k / 10.0, (k + 1) / 10.0);
        t.add(ind, label, bins[static_cast<std::size_t>(k)], "full distribution");
    }
    t.add(ind, ">=2.0", above_2, "full distribution");
    t.add(ind, "recipients", static_cast<double>(recipients), "");
    t.add(ind, "excluded_nonpositive_income", static_cast<double>(excluded), "");
    return t;
}

namespace {

template <class T>
std::vector<std::string> columns_for(std::span<const T> items, std::span<const std::string> labels) {
    if (labels.size() != items.size()) throw ValidationError("one column label per design required");
    return {labels.begin(), labels.end()};
}

} // namespace

Panel table2(std::span<const NetReplacementPanel> panels, std::span<const std::string> column_labels) {
    Panel t;
    t.corner = "Decile";
    t.columns = columns_for(panels, column_labels);
    t.decimals = 1;
    auto pick = [&](auto get) {
        std::vector<double> v;
        for (const auto &p : panels) v.push_back(100.0 * get(p));
        return v;
    };
    t.row("Bottom", pick([](const NetReplacementPanel &p) { return p.decile[0]; }));
    t.row("3rd", pick([](const NetReplacementPanel &p) { return p.decile[2]; }));
    t.row("Median", pick([](const NetReplacementPanel &p) { return p.decile[4]; }));
    t.row("7th", pick([](const NetReplacementPanel &p) { return p.decile[6]; }));
    t.row("Top", pick([](const NetReplacementPanel &p) { return p.decile[9]; }));
    t.row("Average", pick([](const NetReplacementPanel &p) { return p.average; }));
    return t;
}

Panel table3(std::span<const RelativeReplacementBands> bands, std::span<const std::string> column_labels) {
    Panel t;
    t.corner = "RR band";
    t.columns = columns_for(bands, column_labels);
    t.decimals = 1;
    auto pick = [&](auto get) {
        std::vector<double> v;
        for (const auto &b : bands) v.push_back(100.0 * get(b));
        return v;
    };
    t.row("70-89", pick([](const RelativeReplacementBands &b) { return b.band_70_89; }));
    t.row("90-99", pick([](const RelativeReplacementBands &b) { return b.band_90_99; }));
    t.row("≥ 100", pick([](const RelativeReplacementBands &b) { return b.band_100; }));
    t.row("Total", pick([](const RelativeReplacementBands &b) { return b.total(); }));
    return t;
}

Panel table7(std::span<const std::vector<RelativeReplacementBands>> bands, std::span<const std::string> column_labels) {
    Panel t;
    t.corner = "RR_relative (rRR)";
    t.columns.assign(column_labels.begin(), column_labels.end());
    t.decimals = 1;
    for (std::size_t w = 0; w < bands.size(); ++w) {
        if (bands[w].size() != column_labels.size()) throw ValidationError("one column label per design required");
        t.heading(wave_label(w));
        std::vector<double> ge1, ge07;
        for (const auto &b : bands[w]) {
            ge1.push_back(100.0 * b.band_100);
            ge07.push_back(100.0 * b.total());
        }
        t.row("rRR ≥ 1", ge1);
        t.row("rRR ≥ 0.7", ge07);
    }
    return t;
}

std::string wave_label(std::size_t index) {
    const auto n = index + 1;
    const char *suffix = "th";
    if (n % 100 < 11 || n % 100 > 13) {
        if (n % 10 == 1) suffix = "st";
        else if (n % 10 == 2) suffix = "nd";
        else if (n % 10 == 3) suffix = "rd";
    }
    return std::to_string(n) + suffix + " wave";
}

} // namespace wsim::ind
