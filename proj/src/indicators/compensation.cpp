#include "wsim/indicators/compensation.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/parallel.hpp"
#include "wsim/indicators/inequality.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wsim::ind {

namespace {

const boost::math::normal_distribution<double> kStdNormal{};

double capped_rate(double payment, double gross) { return std::min(1.0, payment / gross); }

} // namespace

WorkerDistribution WorkerDistribution::from_quantiles(double x1, double p1, double x2, double p2) {
    if (!(x1 > 0.0 && x2 > x1 && p1 > 0.0 && p2 > p1 && p2 < 1.0))
        throw ConfigError("worker distribution needs 0 < x1 < x2 and 0 < p1 < p2 < 1");
    const double z1 = boost::math::quantile(kStdNormal, p1);
    const double z2 = boost::math::quantile(kStdNormal, p2);
    WorkerDistribution d;
    d.sigma = (std::log(x2) - std::log(x1)) / (z2 - z1);
    d.mu = std::log(x2) - d.sigma * z2;
    return d;
}

double WorkerDistribution::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return boost::math::cdf(kStdNormal, (std::log(x) - mu) / sigma);
}

double WorkerDistribution::quantile(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return std::exp(mu + sigma * boost::math::quantile(kStdNormal, p));
}

double WorkerDistribution::mean() const { return std::exp(mu + sigma * sigma / 2.0); }

WorkerDistribution default_worker_distribution() {
    return WorkerDistribution::from_quantiles(151.50, 0.04, 1462.0, 0.90);
}

double compensation_rate(const policy::WageSubsidySchedule &schedule, double prev_gross,
                         const policy::TaxBenefitParams &params, double employer_topup_share) {
    if (!(prev_gross > 0.0)) throw ValidationError("compensation rate needs positive previous earnings");
    const Cents gross = Cents::from_euros(prev_gross);
    const Cents pay = policy::cws_payment(schedule, gross, policy::net_pay(gross, params), employer_topup_share);
    return capped_rate(pay.euros(), gross.euros());
}

CompensationPanel compensation_panel(const policy::WageSubsidySchedule &schedule, const policy::TaxBenefitParams &params,
                                     const CompensationOptions &options) {
    if (!(options.grid_step > 0.0) || !(options.upper > options.grid_step))
        throw ConfigError("compensation grid needs a positive step below the ceiling");
    const auto step = Cents::from_euros(options.grid_step).value();
    const auto ceiling = Cents::from_euros(options.upper).value();
    if (step <= 0) throw ConfigError("compensation grid step must be at least one cent");

    // Grid points at step, 2*step, ... below the ceiling (zero earnings are excluded).
    const auto n = static_cast<std::size_t>((ceiling - 1) / step);
    std::vector<double> gross(n), rate(n);
    parallel::for_each_index(n, [&](std::size_t i) {
        const Cents g{static_cast<std::int64_t>(i + 1) * step};
        const Cents pay = policy::cws_payment(schedule, g, policy::net_pay(g, params), options.employer_topup_share);
        gross[i] = g.euros();
        rate[i] = capped_rate(pay.euros(), g.euros());
    });
    const auto first = std::find_if(rate.begin(), rate.end(), [](double r) { return r > 0.0; });
    if (first == rate.end()) throw ValidationError("schedule " + schedule.id + " pays nothing in the eligible range");
    const auto start = static_cast<std::size_t>(first - rate.begin());

    CompensationPanel p;
    p.design = schedule.id;
    p.lower = gross[start];
    p.upper = options.upper;
    p.excluded_zero = 1;
    const double f_lo = options.workers.cdf(p.lower), f_hi = options.workers.cdf(p.upper);
    for (int k = 0; k <= 10; ++k) p.bounds[static_cast<std::size_t>(k)] = options.workers.quantile(f_lo + k / 10.0 * (f_hi - f_lo));
    p.bounds[0] = p.lower;
    p.bounds[10] = p.upper;

    std::array<double, 10> sum{};
    std::size_t d = 0;
    for (std::size_t i = start; i < n; ++i) {
        while (d < 9 && gross[i] >= p.bounds[d + 1]) ++d;
        sum[d] += rate[i];
        ++p.points[d];
    }
    for (std::size_t k = 0; k < 10; ++k) {
        p.decile[k] = p.points[k] ? sum[k] / static_cast<double>(p.points[k]) : std::nan("");
        p.average_decile_weighted += p.decile[k] / 10.0;
    }
    const double mean = options.workers.mean();
    p.average = compensation_rate(schedule, mean, params, options.employer_topup_share);
    return p;
}

CompensationPanel compensation_panel(const policy::WageSubsidySchedule &schedule, std::span<const Person> recipients, std::span<const double> weights,
                                     double employer_topup_share) {
    if (!weights.empty() && weights.size() != recipients.size())
        throw ValidationError("weights must be empty or one per recipient");
    CompensationPanel p;
    p.design = schedule.id;
    std::vector<double> gross, rate, w;
    for (std::size_t i = 0; i < recipients.size(); ++i) {
        const auto &r = recipients[i];
        if (!(r.prev_gross_earnings > 0.0)) {
            ++p.excluded_zero;
            continue;
        }
        const Cents pay = policy::cws_payment(schedule, r.prev_gross_earnings, r.prev_net_earnings, employer_topup_share);
        gross.push_back(r.prev_gross_earnings);
        rate.push_back(capped_rate(pay.euros(), Cents::from_euros(r.prev_gross_earnings).euros()));
        w.push_back(weights.empty() ? 1.0 : weights[i]);
    }
    if (gross.empty()) throw ValidationError("no recipients with positive previous earnings");
    const auto groups = decile_groups(gross, w);
    const auto means = group_means(rate, groups, w, 10);
    std::array<double, 11> lo;
    lo.fill(std::numeric_limits<double>::infinity());
    double total = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < gross.size(); ++i) {
        const auto g = static_cast<std::size_t>(groups[i] - 1);
        ++p.points[g];
        lo[g] = std::min(lo[g], gross[i]);
        total += w[i];
        acc += w[i] * rate[i];
    }
    std::copy(means.begin(), means.end(), p.decile.begin());
    p.lower = *std::min_element(gross.begin(), gross.end());
    p.upper = *std::max_element(gross.begin(), gross.end());
    for (std::size_t k = 0; k < 10; ++k) p.bounds[k] = lo[k];
    p.bounds[10] = p.upper;
    p.average = acc / total;
    p.average_decile_weighted = p.average;
    return p;
}

IndicatorTable CompensationPanel::table() const {
    IndicatorTable t;
    const std::string note = "equal weight per earnings point within decile";
    const std::string ind = "compensation_rate:" + design;
    for (std::size_t k = 0; k < 10; ++k) t.add(ind, "decile_" + std::to_string(k + 1), decile[k], note);
    t.add(ind, "bottom", bottom(), "decile 1");
    t.add(ind, "median", median(), "decile 6");
    t.add(ind, "top", top(), "decile 10");
    t.add(ind, "average", average, "rate at mean worker earnings");
    t.add(ind, "average_decile_weighted", average_decile_weighted, "worker-share weighted decile mean");
    for (std::size_t k = 0; k <= 10; ++k) t.add("decile_bound:" + design, std::to_string(k), bounds[k], "previous gross pay");
    return t;
}

Panel table1(std::span<const CompensationPanel> panels, std::span<const std::string> column_labels) {
    if (!column_labels.empty() && column_labels.size() != panels.size())
        throw ValidationError("one column label per panel required");
    Panel t;
    t.corner = "Decile";
    t.decimals = 2;
    for (std::size_t i = 0; i < panels.size(); ++i)
        t.columns.push_back(column_labels.empty() ? panels[i].design : column_labels[i]);
    auto collect = [&](auto get) {
        std::vector<double> v;
        for (const auto &p : panels) v.push_back(get(p));
        return v;
    };
    t.row("Bottom", collect([](const CompensationPanel &p) { return p.bottom(); }));
    t.row("Median", collect([](const CompensationPanel &p) { return p.median(); }));
    t.row("Top", collect([](const CompensationPanel &p) { return p.top(); }));
    t.row("Average", collect([](const CompensationPanel &p) { return p.average; }));
    return t;
}

} // namespace wsim::ind
