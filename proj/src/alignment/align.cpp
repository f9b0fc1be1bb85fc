#include "wsim/alignment/align.hpp"
#include "wsim/core/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>

namespace wsim::align {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logit_clamped(double x) noexcept {
    constexpr double hi = 1.0 - DBL_EPSILON / 2.0;
    x = std::clamp(x, DBL_MIN, hi);
    return std::log(x) - std::log1p(-x);
}

} // namespace

double binary_statistic(double p, double u) noexcept { return logit_clamped(p) - logit_clamped(u); }

std::vector<std::uint8_t> select_top_k(std::span<const double> statistic, std::span<const std::int64_t> ids,
                                       std::size_t k) {
    const auto n = statistic.size();
    if (ids.size() != n) throw ValidationError("select_top_k: statistic and ids differ in length");
    if (k > n) throw InfeasibleError("alignment target " + std::to_string(k) + " exceeds " + std::to_string(n) + " units");
    std::vector<std::uint8_t> out(n, 0);
    if (k == 0) return out;
    if (k == n) {
        std::fill(out.begin(), out.end(), 1);
        return out;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto before = [&](std::size_t a, std::size_t b) {
        if (statistic[a] != statistic[b]) return statistic[a] > statistic[b];
        return ids[a] < ids[b];
    };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(), before);
    for (std::size_t i = 0; i < k; ++i) out[order[i]] = 1;
    return out;
}

std::vector<std::uint8_t> align_binary(std::span<const double> p, std::span<const double> u,
                                       std::span<const std::int64_t> ids, std::size_t k) {
    if (p.size() != u.size()) throw ValidationError("align_binary: probabilities and draws differ in length");
    std::vector<double> stat(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) stat[i] = binary_statistic(p[i], u[i]);
    return select_top_k(stat, ids, k);
}

double multinomial_score(double p, double u) noexcept {
    if (!(p > 0.0)) return -kInf;
    return std::log(p) - std::log(-std::log(std::clamp(u, DBL_MIN, 1.0 - DBL_EPSILON / 2.0)));
}

std::vector<int> argmax_rows(std::span<const double> scores, int k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto n = scores.size() / kk;
    std::vector<int> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double *row = scores.data() + i * kk;
        std::size_t best = 0;
        for (std::size_t j = 1; j < kk; ++j)
            if (row[j] > row[best]) best = j;
        out[i] = static_cast<int>(best);
    }
    return out;
}

std::vector<int> align_multinomial(std::span<const double> scores, int k, std::span<const std::int64_t> ids,
                                   std::span<const std::size_t> targets) {
    if (k < 1) throw ValidationError("align_multinomial: need at least one outcome");
    const auto kk = static_cast<std::size_t>(k);
    if (scores.size() % kk != 0) throw ValidationError("align_multinomial: score matrix is not n x k");
    const auto n = scores.size() / kk;
    if (ids.size() != n) throw ValidationError("align_multinomial: ids and scores differ in length");
    if (targets.size() != kk) throw ValidationError("align_multinomial: need one target per outcome");
    const auto total = std::accumulate(targets.begin(), targets.end(), std::size_t{0});
    if (total != n)
        throw InfeasibleError("align_multinomial: targets sum to " + std::to_string(total) + ", expected " +
                              std::to_string(n));

    // suffix[i*k + j] = max score of unit i over outcomes j+1..k-1.
    std::vector<double> suffix(n * kk, -kInf);
    for (std::size_t i = 0; i < n; ++i) {
        const double *row = scores.data() + i * kk;
        double m = -kInf;
        for (std::size_t j = kk; j-- > 0;) {
            suffix[i * kk + j] = m;
            m = std::max(m, row[j]);
        }
    }

    std::vector<int> out(n, -1);
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<double> margin;
    std::vector<std::int64_t> pool_ids;
    for (std::size_t j = 0; j + 1 < kk; ++j) {
        margin.resize(pool.size());
        pool_ids.resize(pool.size());
        for (std::size_t a = 0; a < pool.size(); ++a) {
            const auto i = pool[a];
            const double s = scores[i * kk + j];
            const double rest = suffix[i * kk + j];
            if (s == -kInf)
                margin[a] = -kInf;
            else if (rest == -kInf)
                margin[a] = kInf;
            else
                margin[a] = s - rest;
            pool_ids[a] = ids[i];
        }
        const auto chosen = select_top_k(margin, pool_ids, targets[j]);
        std::vector<std::size_t> next;
        next.reserve(pool.size() - targets[j]);
        for (std::size_t a = 0; a < pool.size(); ++a) {
            if (chosen[a])
                out[pool[a]] = static_cast<int>(j);
            else
                next.push_back(pool[a]);
        }
        pool.swap(next);
    }
    for (auto i : pool) out[i] = k - 1;
    return out;
}

std::vector<double> align_continuous(std::span<const double> values, double target_total) {
    double total = 0.0;
    for (double v : values) total += v;
    std::vector<double> out(values.begin(), values.end());
    if (total == 0.0) {
        if (target_total == 0.0) return out;
        throw InfeasibleError("align_continuous: current total is zero, cannot scale to a nonzero target");
    }
    const double ratio = target_total / total;
    for (auto &v : out) v *= ratio;
    return out;
}

std::vector<double> align_continuous_mean(std::span<const double> values, double target_mean) {
    return align_continuous(values, target_mean * static_cast<double>(values.size()));
}

std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InfeasibleError("apportion: weights must be finite and >= 0");
        sum += w;
    }
    std::vector<std::size_t> out(weights.size(), 0);
    if (total == 0) return out;
    if (!(sum > 0.0)) throw InfeasibleError("apportion: all weights are zero");
    std::vector<double> rem(weights.size());
    std::size_t given = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double q = weights[i] / sum * static_cast<double>(total);
        out[i] = static_cast<std::size_t>(std::floor(q));
        rem[i] = q - std::floor(q);
        given += out[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t r = 0; given < total; ++r, ++given) ++out[order[r % order.size()]];
    while (given > total) {
        // floor rounding can only overshoot through accumulated error; take back from the largest cell
        auto it = std::max_element(out.begin(), out.end());
        --*it;
        --given;
    }
    return out;
}

} // namespace wsim::align
