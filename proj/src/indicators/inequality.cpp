#include "wsim/indicators/inequality.hpp"
#include "wsim/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wsim::ind {

namespace {

std::vector<double> unit_or(std::span<const double> weights, std::size_t n) {
    if (weights.empty()) return std::vector<double>(n, 1.0);
    if (weights.size() != n) throw ValidationError("weights must be empty or one per unit");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("weights must be positive and finite");
    return {weights.begin(), weights.end()};
}

void check_finite(std::span<const double> v, const char *what) {
    for (double x : v)
        if (!std::isfinite(x)) throw ValidationError(std::string(what) + " must be finite");
}

} // namespace

double concentration_index(std::span<const double> amounts, std::span<const double> ranking,
                           std::span<const double> weights) {
    const auto n = amounts.size();
    if (ranking.size() != n) throw ValidationError("amounts and ranking variable differ in length");
    if (n == 0) throw ValidationError("concentration index of an empty sample");
    check_finite(amounts, "amounts");
    check_finite(ranking, "ranking variable");
    const auto w = unit_or(weights, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranking[a] < ranking[b]; });

    double total_w = 0.0, total_a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total_w += w[i];
        total_a += w[i] * amounts[i];
    }
    const double mean = total_a / total_w;
    if (mean == 0.0) throw ValidationError("concentration index undefined for zero mean");

    // Sum over tie groups of (group amount) * (mid-rank - 1/2).
    double acc = 0.0;
    double before = 0.0;
    for (std::size_t s = 0; s < n;) {
        std::size_t e = s;
        double gw = 0.0, ga = 0.0;
        while (e < n && ranking[order[e]] == ranking[order[s]]) {
            gw += w[order[e]];
            ga += w[order[e]] * amounts[order[e]];
            ++e;
        }
        const double mid = (before + gw / 2.0) / total_w;
        acc += ga * (mid - 0.5);
        before += gw;
        s = e;
    }
    return 2.0 * acc / (total_w * mean);
}

double gini(std::span<const double> values, std::span<const double> weights) {
    check_finite(values, "values");
    for (double v : values)
        if (v < 0.0) throw ValidationError("gini requires non-negative values");
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }))
        throw ValidationError("gini undefined when all values are zero");
    return concentration_index(values, values, weights);
}

std::string_view to_string(KakwaniConvention c) {
    return c == KakwaniConvention::concentration_minus_gini ? "C-G" : "G-C";
}

KakwaniConvention parse_kakwani_convention(std::string_view s) {
    if (s == "C-G" || s == "concentration_minus_gini") return KakwaniConvention::concentration_minus_gini;
    if (s == "G-C" || s == "gini_minus_concentration") return KakwaniConvention::gini_minus_concentration;
    throw ConfigError("unknown Kakwani convention '" + std::string(s) + "'");
}

KakwaniResult kakwani(std::span<const double> benefits, std::span<const double> pre_income, KakwaniConvention convention,
                      std::span<const double> weights) {
    const double c = concentration_index(benefits, pre_income, weights);
    const double g = gini(pre_income, weights);
    return {convention == KakwaniConvention::concentration_minus_gini ? c - g : g - c, convention};
}

double reynolds_smolensky(std::span<const double> income_without, std::span<const double> income_with,
                          std::span<const double> weights) {
    if (income_without.size() != income_with.size()) throw ValidationError("income vectors differ in length");
    return gini(income_without, weights) - gini(income_with, weights);
}

std::vector<int> quantile_groups(std::span<const double> values, std::span<const double> weights, int k) {
    const auto n = values.size();
    if (k < 1) throw ValidationError("need at least one group");
    const auto w = unit_or(weights, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<int> out(n, 0);
    double before = 0.0;
    for (auto i : order) {
        const double mid = (before + w[i] / 2.0) / total;
        out[i] = std::min(k, static_cast<int>(std::floor(mid * k)) + 1);
        before += w[i];
    }
    return out;
}

std::vector<double> group_means(std::span<const double> values, std::span<const int> groups,
                                std::span<const double> weights, int k) {
    if (groups.size() != values.size()) throw ValidationError("groups and values differ in length");
    const auto w = unit_or(weights, values.size());
    std::vector<double> sum(static_cast<std::size_t>(k), 0.0), wt(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (groups[i] < 1 || groups[i] > k) continue;
        sum[static_cast<std::size_t>(groups[i] - 1)] += w[i] * values[i];
        wt[static_cast<std::size_t>(groups[i] - 1)] += w[i];
    }
    std::vector<double> out(static_cast<std::size_t>(k));
    for (std::size_t g = 0; g < out.size(); ++g)
        out[g] = wt[g] > 0.0 ? sum[g] / wt[g] : std::numeric_limits<double>::quiet_NaN();
    return out;
}

namespace reference {

double gini_pairwise(std::span<const double> values, std::span<const double> weights) {
    const auto n = values.size();
    const auto w = unit_or(weights, n);
    double total_w = 0.0, total = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total_w += w[i];
        total += w[i] * values[i];
        for (std::size_t j = 0; j < n; ++j) diff += w[i] * w[j] * std::abs(values[i] - values[j]);
    }
    const double mean = total / total_w;
    if (mean == 0.0) throw ValidationError("gini undefined when all values are zero");
    return diff / (2.0 * total_w * total_w * mean);
}

double concentration_pairwise(std::span<const double> amounts, std::span<const double> ranking,
                              std::span<const double> weights) {
    const auto n = amounts.size();
    const auto w = unit_or(weights, n);
    double total_w = 0.0, total = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total_w += w[i];
        total += w[i] * amounts[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double s = ranking[i] > ranking[j] ? 1.0 : (ranking[i] < ranking[j] ? -1.0 : 0.0);
            acc += w[i] * w[j] * s * (amounts[i] - amounts[j]);
        }
    }
    const double mean = total / total_w;
    if (mean == 0.0) throw ValidationError("concentration index undefined for zero mean");
    return acc / (2.0 * total_w * total_w * mean);
}

} // namespace reference

} // namespace wsim::ind
