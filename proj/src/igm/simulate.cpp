#include "wsim/igm/simulate.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/parallel.hpp"
#include "wsim/igm/covariates.hpp"

#include <cmath>
#include <limits>

namespace wsim::igm {

namespace {

double sigmoid(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

void check_observed(std::size_t n, std::size_t m) {
    if (m != 0 && m != n) throw ValidationError("observed outcomes must be empty or one per person");
}

double gumbel(double u) { return -std::log(-std::log(u)); }

} // namespace

PresenceDraw presence_draw(double p, std::uint64_t seed, std::int64_t id, rng::Stream stream, std::int8_t observed) {
    const double u0 = rng::uniform_open(seed, static_cast<std::uint64_t>(id), stream);
    PresenceDraw d;
    d.p = p;
    if (observed == 1)
        d.u = u0 * p;
    else if (observed == 0)
        d.u = p + u0 * (1.0 - p);
    else
        d.u = u0;
    d.flag = d.u < p;
    return d;
}

std::vector<PresenceDraw> simulate_presence(const BinaryModelParams &params, std::span<const Person> persons,
                                            std::uint64_t seed, rng::Stream stream,
                                            std::span<const std::int8_t> observed) {
    check_observed(persons.size(), observed.size());
    const auto cov = CovariateSet::parse(params.covariates);
    std::vector<PresenceDraw> out(persons.size());
    parallel::for_each_index(persons.size(), [&](std::size_t i) {
        const double p = sigmoid(cov.linear_predictor(persons[i], params.coef));
        out[i] = presence_draw(p, seed, persons[i].id, stream, observed.empty() ? kUnobserved : observed[i]);
    });
    return out;
}

std::vector<double> simulate_level(const LevelModelParams &params, const ResidualStore &residuals,
                                   std::span<const Person> persons, std::span<const std::uint8_t> present) {
    if (present.size() != persons.size()) throw ValidationError("simulate_level: presence flags missing");
    const auto cov = CovariateSet::parse(params.covariates);
    std::vector<double> out(persons.size(), 0.0);
    parallel::for_each_index(persons.size(), [&](std::size_t i) {
        if (present[i]) out[i] = std::exp(cov.linear_predictor(persons[i], params.coef) + residuals.get(persons[i].id));
    });
    return out;
}

void categorical_scores(std::span<const double> probs, std::uint64_t seed, std::int64_t id, rng::Stream stream,
                        int observed, std::span<double> out) {
    const auto k = probs.size();
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    auto u = [&](std::size_t j) { return rng::uniform_open(seed, static_cast<std::uint64_t>(id), stream, j); };
    if (observed < 0) {
        for (std::size_t j = 0; j < k; ++j) out[j] = probs[j] > 0.0 ? std::log(probs[j]) + gumbel(u(j)) : neg_inf;
        return;
    }
    // The maximum of the scores is Gumbel with location log(sum p) = 0; the
    // remaining scores are Gumbels truncated above at that maximum.
    const auto c = static_cast<std::size_t>(observed);
    const double top = gumbel(u(c));
    out[c] = top;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == c) continue;
        if (!(probs[j] > 0.0)) {
            out[j] = neg_inf;
            continue;
        }
        const double free = std::log(probs[j]) + gumbel(u(j));
        out[j] = -std::log(std::exp(-top) + std::exp(-free));
        if (!(out[j] < top)) out[j] = std::nextafter(top, neg_inf);
    }
}

CategoricalDraws simulate_categorical(const MultinomialModelParams &params, std::span<const Person> persons,
                                      std::uint64_t seed, rng::Stream stream, std::span<const int> observed) {
    check_observed(persons.size(), observed.size());
    const auto cov = CovariateSet::parse(params.covariates);
    CategoricalDraws d;
    d.k = params.outcome_count();
    const auto k = static_cast<std::size_t>(d.k);
    d.scores.resize(persons.size() * k);
    d.outcome.resize(persons.size());
    for (int o : observed)
        if (o >= d.k) throw ValidationError("observed outcome out of range");
    parallel::for_each_index(persons.size(), [&](std::size_t i) {
        Eigen::RowVectorXd x(cov.width());
        cov.fill_row(persons[i], x.data());
        double probs[64];
        std::vector<double> heap;
        std::span<double> pr(probs, k);
        if (k > 64) {
            heap.resize(k);
            pr = heap;
        }
        params.probabilities(x, pr);
        const int obs = observed.empty() ? -1 : observed[i];
        std::span<double> row(d.scores.data() + i * k, k);
        categorical_scores(pr, seed, persons[i].id, stream, obs, row);
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j)
            if (row[j] > row[best]) best = j;
        d.outcome[i] = static_cast<int>(best);
    });
    return d;
}

namespace reference {

std::vector<PresenceDraw> simulate_presence(const BinaryModelParams &params, std::span<const Person> persons,
                                            std::uint64_t seed, rng::Stream stream,
                                            std::span<const std::int8_t> observed) {
    check_observed(persons.size(), observed.size());
    const auto cov = CovariateSet::parse(params.covariates);
    std::vector<PresenceDraw> out;
    out.reserve(persons.size());
    for (std::size_t i = 0; i < persons.size(); ++i) {
        const double p = sigmoid(cov.linear_predictor(persons[i], params.coef));
        out.push_back(presence_draw(p, seed, persons[i].id, stream, observed.empty() ? kUnobserved : observed[i]));
    }
    return out;
}

std::vector<double> simulate_level(const LevelModelParams &params, const ResidualStore &residuals,
                                   std::span<const Person> persons, std::span<const std::uint8_t> present) {
    if (present.size() != persons.size()) throw ValidationError("simulate_level: presence flags missing");
    const auto cov = CovariateSet::parse(params.covariates);
    std::vector<double> out(persons.size(), 0.0);
    for (std::size_t i = 0; i < persons.size(); ++i)
        if (present[i]) out[i] = std::exp(cov.linear_predictor(persons[i], params.coef) + residuals.get(persons[i].id));
    return out;
}

} // namespace reference

} // namespace wsim::igm
