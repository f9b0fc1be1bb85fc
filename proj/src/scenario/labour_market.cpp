#include "wsim/scenario/labour_market.hpp"
#include "wsim/alignment/align.hpp"
#include "wsim/alignment/ipf.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/parallel.hpp"
#include "wsim/core/rng.hpp"
#include "wsim/igm/covariates.hpp"
#include "wsim/igm/simulate.hpp"
#include "wsim/indicators/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace wsim {

namespace {

using Tokens = std::vector<std::string>;

const Tokens kInWorkCov{"intercept", "age_band", "gender", "education"};
const Tokens kPersonCov{"intercept", "gender", "education", "age"};
const Tokens kSectorCov{"intercept", "gender", "education"};
const Tokens kEarningsCov{"intercept", "age_band", "gender", "education", "industry", "occupation", "sector", "contract"};
const Tokens kIntercept{"intercept"};

constexpr int kMaxCode = 63;

double round_cents(double x) { return std::round(x * 100.0) / 100.0; }

std::vector<std::size_t> subsample(const std::vector<std::size_t> &idx, std::size_t cap) {
    if (cap == 0 || idx.size() <= cap) return idx;
    std::vector<std::size_t> out(cap);
    for (std::size_t k = 0; k < cap; ++k) out[k] = idx[k * idx.size() / cap];
    return out;
}

double logit_clamped(double p) {
    p = std::clamp(p, 1e-9, 1.0 - 1e-9);
    return std::log(p / (1.0 - p));
}

igm::BinaryModelParams fit_presence(const std::string &name, std::span<const Person> persons,
                                    const std::vector<std::size_t> &rows, const std::vector<double> &y,
                                    const Tokens &tokens, const igm::FitOptions &fit, std::vector<std::string> &warnings) {
    const double mean = y.empty() ? 0.0 : std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    igm::BinaryModelParams out;
    if (y.empty() || mean == 0.0 || mean == 1.0) {
        warnings.push_back("equation " + name + ": outcome constant in the estimation sample; intercept-only model");
        out.coef = Eigen::VectorXd::Constant(1, logit_clamped(mean));
        out.std_errors = Eigen::VectorXd::Zero(1);
        out.covariates = kIntercept;
    } else {
        const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
        for (const Tokens *t : {&tokens, &kIntercept}) {
            const auto cov = igm::CovariateSet::parse(*t);
            try {
                out = igm::fit_binary(cov.design(persons, rows), yv, fit);
                out.covariates = *t;
                break;
            } catch (const Error &e) {
                if (t == &kIntercept) throw;
                warnings.push_back("equation " + name + ": " + e.what() + "; refitted with intercept only");
            }
        }
    }
    out.equation = name;
    out.names = igm::CovariateSet::parse(out.covariates).names();
    out.fitted.clear();
    return out;
}

igm::MultinomialModelParams fit_category(const std::string &name, std::span<const Person> persons,
                                         const std::vector<std::size_t> &rows, const std::vector<int> &codes,
                                         const Tokens &tokens, const igm::FitOptions &fit,
                                         std::vector<std::string> &warnings) {
    std::vector<int> outcomes(codes.begin(), codes.end());
    std::sort(outcomes.begin(), outcomes.end());
    outcomes.erase(std::unique(outcomes.begin(), outcomes.end()), outcomes.end());
    igm::MultinomialModelParams out;
    if (outcomes.size() < 2) {
        warnings.push_back("equation " + name + ": fewer than two categories observed; degenerate model");
        out.covariates = kIntercept;
        out.coef = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(std::max<std::size_t>(outcomes.size(), 1)));
        out.std_errors = out.coef;
        if (outcomes.empty()) outcomes.push_back(0);
    } else {
        std::vector<int> y(codes.size());
        for (std::size_t i = 0; i < codes.size(); ++i)
            y[i] = static_cast<int>(std::lower_bound(outcomes.begin(), outcomes.end(), codes[i]) - outcomes.begin());
        for (const Tokens *t : {&tokens, &kIntercept}) {
            const auto cov = igm::CovariateSet::parse(*t);
            try {
                out = igm::fit_multinomial(cov.design(persons, rows), y, static_cast<int>(outcomes.size()), fit);
                out.covariates = *t;
                break;
            } catch (const Error &e) {
                if (t == &kIntercept) throw;
                warnings.push_back("equation " + name + ": " + e.what() + "; refitted with intercept only");
            }
        }
    }
    out.equation = name;
    out.outcomes = outcomes;
    out.names = igm::CovariateSet::parse(out.covariates).names();
    return out;
}

/// Code position in the model's outcome list, or -1.
int outcome_index(const igm::MultinomialModelParams &m, int code) {
    const auto it = std::lower_bound(m.outcomes.begin(), m.outcomes.end(), code);
    return it != m.outcomes.end() && *it == code ? static_cast<int>(it - m.outcomes.begin()) : -1;
}

double probability(const igm::BinaryModelParams &m, const igm::CovariateSet &cov, const Person &p) {
    return m.probability(cov.linear_predictor(p, m.coef));
}

/// Clamps a cell target to the available units, warning when it binds.
std::size_t clamp_target(std::size_t target, std::size_t available, const std::string &what,
                         std::vector<std::string> &warnings) {
    if (target <= available) return target;
    warnings.push_back(what + ": target " + std::to_string(target) + " exceeds " + std::to_string(available) +
                       " eligible units; clamped");
    return available;
}

std::size_t scaled_count(double count, double scale) {
    const double v = std::llround(count * scale);
    return v > 0 ? static_cast<std::size_t>(v) : 0;
}

/// Aligns a binary outcome within one group. Returns the selection and adds
/// the number of units whose status differs from the unaligned draw.
std::vector<std::uint8_t> align_group(const std::vector<std::size_t> &units, std::span<const Person> persons,
                                      std::span<const igm::PresenceDraw> draws, std::size_t k, std::size_t &changed) {
    std::vector<double> p(units.size()), u(units.size());
    std::vector<std::int64_t> ids(units.size());
    for (std::size_t j = 0; j < units.size(); ++j) {
        p[j] = draws[units[j]].p;
        u[j] = draws[units[j]].u;
        ids[j] = persons[units[j]].id;
    }
    auto sel = align::align_binary(p, u, ids, k);
    for (std::size_t j = 0; j < units.size(); ++j) changed += (sel[j] != 0) != draws[units[j]].flag;
    return sel;
}

/// Take-up selection per industry with constant probability; current
/// recipients rank first so matching targets keep them.
void assign_takeup(std::vector<Person> &persons, const std::vector<std::size_t> &eligible,
                   const std::map<int, double> &counts, double scale, std::uint64_t seed, rng::Stream stream,
                   bool Person::*flag, const std::vector<std::uint8_t> &was, const std::string &what,
                   std::vector<std::string> &warnings, std::size_t &assigned) {
    std::map<int, std::vector<std::size_t>> by_industry;
    for (auto i : eligible) by_industry[persons[i].industry].push_back(i);
    for (const auto &[industry, count] : counts) {
        const auto &pool = by_industry[industry];
        const auto k = clamp_target(scaled_count(count, scale), pool.size(),
                                    what + " in industry " + std::to_string(industry), warnings);
        std::vector<double> p(pool.size(), 0.5), u(pool.size());
        std::vector<std::int64_t> ids(pool.size());
        for (std::size_t j = 0; j < pool.size(); ++j) {
            const auto &person = persons[pool[j]];
            u[j] = igm::presence_draw(0.5, seed, person.id, stream, was[pool[j]] ? 1 : 0).u;
            ids[j] = person.id;
        }
        const auto sel = align::align_binary(p, u, ids, k);
        for (std::size_t j = 0; j < pool.size(); ++j)
            if (sel[j]) {
                persons[pool[j]].*flag = true;
                ++assigned;
            }
    }
}

} // namespace

LabourMarketModels estimate_models(const PopulationSnapshot &base, std::uint64_t seed, const EstimationOptions &options) {
    const auto persons = base.persons();
    LabourMarketModels m;
    std::vector<std::size_t> adults, workers, out_of_work, earners, coded_workers;
    for (std::size_t i = 0; i < persons.size(); ++i) {
        const auto &p = persons[i];
        if (p.is_child()) continue;
        adults.push_back(i);
        if (p.in_work()) {
            workers.push_back(i);
            if (p.gross_earnings > 0.0) earners.push_back(i);
            if (p.industry >= 0 && p.industry <= kMaxCode && p.occupation >= 0 && p.occupation <= kMaxCode)
                coded_workers.push_back(i);
        } else if (p.labour_state != LabourState::retired) {
            out_of_work.push_back(i);
        }
    }
    if (adults.empty()) throw ValidationError("base population has no adults to estimate on");
    auto &w = m.warnings;

    {
        const auto rows = subsample(adults, options.sample_cap);
        std::vector<double> y;
        for (auto i : rows) y.push_back(persons[i].in_work() ? 1.0 : 0.0);
        m.in_work = fit_presence("in_work", persons, rows, y, kInWorkCov, options.fit, w);
    }
    {
        const auto rows = subsample(workers, options.sample_cap);
        std::vector<double> y;
        for (auto i : rows) y.push_back(persons[i].labour_state == LabourState::employee ? 1.0 : 0.0);
        m.employee = fit_presence("employee", persons, rows, y, kPersonCov, options.fit, w);
    }
    {
        const auto rows = subsample(out_of_work, options.sample_cap);
        std::vector<double> y;
        for (auto i : rows) y.push_back(persons[i].labour_state == LabourState::unemployed ? 1.0 : 0.0);
        m.unemployed = fit_presence("unemployed", persons, rows, y, kPersonCov, options.fit, w);
    }
    {
        const auto rows = subsample(coded_workers, options.sample_cap);
        std::vector<int> ind, occ;
        for (auto i : rows) {
            ind.push_back(persons[i].industry);
            occ.push_back(persons[i].occupation);
        }
        m.industry = fit_category("industry", persons, rows, ind, kSectorCov, options.fit, w);
        m.occupation = fit_category("occupation", persons, rows, occ, kSectorCov, options.fit, w);
    }
    {
        const auto rows = subsample(earners, options.sample_cap);
        std::vector<double> levels;
        for (auto i : rows) levels.push_back(persons[i].gross_earnings);
        Tokens earnings_cov = kEarningsCov;
        // Category widths follow the largest observed code.
        int max_ind = 0, max_occ = 0;
        for (auto i : rows) {
            max_ind = std::max(max_ind, persons[i].industry);
            max_occ = std::max(max_occ, persons[i].occupation);
        }
        earnings_cov[4] = "industry:" + std::to_string(std::max(igm::kDefaultIndustries, max_ind + 1));
        earnings_cov[5] = "occupation:" + std::to_string(std::max(igm::kDefaultOccupations, max_occ + 1));
        if (rows.empty()) throw ValidationError("base population has no workers with earnings");
        const Tokens reduced{"intercept", "gender", "education"};
        for (const Tokens *t : {static_cast<const Tokens *>(&earnings_cov), &reduced, &kIntercept}) {
            const auto cov = igm::CovariateSet::parse(*t);
            try {
                m.earnings = igm::fit_level(cov.design(persons, rows), levels);
                m.earnings.covariates = *t;
                break;
            } catch (const ValidationError &e) {
                if (t == &kIntercept) throw;
                w.push_back(std::string("equation earnings: ") + e.what() + "; refitted with fewer covariates");
            }
        }
        m.earnings.equation = "earnings";
        m.earnings.names = igm::CovariateSet::parse(m.earnings.covariates).names();
    }

    m.earnings_residuals = igm::ResidualStore("earnings", m.earnings.residual_sd, seed, rng::Stream::earnings_level);
    const auto cov = igm::CovariateSet::parse(m.earnings.covariates);
    std::vector<double> eps(earners.size());
    parallel::for_each_index(earners.size(), [&](std::size_t k) {
        const auto &p = persons[earners[k]];
        eps[k] = std::log(p.gross_earnings) - cov.linear_predictor(p, m.earnings.coef);
    });
    for (std::size_t k = 0; k < earners.size(); ++k) m.earnings_residuals.set_observed(persons[earners[k]].id, eps[k]);
    return m;
}

StageResult simulate_labour_market(const PopulationSnapshot &base, const LabourMarketModels &models,
                                   const ControlTotals &totals, const policy::TaxBenefitParams &params,
                                   std::uint64_t seed, const LabourMarketOptions &options) {
    if (!(totals.reference_population > 0.0)) throw ConfigError("control totals need a positive reference_population");
    const auto base_persons = base.persons();
    const auto n = base_persons.size();
    const double scale = totals.scale(n);
    StageResult res;
    auto &warnings = res.warnings;
    auto &stats = res.stats;
    std::vector<Person> persons(base_persons.begin(), base_persons.end());

    // In-work status by age band x gender.
    std::vector<std::int8_t> obs(n, igm::kUnobserved);
    for (std::size_t i = 0; i < n; ++i)
        if (!persons[i].is_child()) obs[i] = persons[i].in_work() ? 1 : 0;
    const auto in_work_draws = igm::simulate_presence(models.in_work, base_persons, seed, rng::Stream::in_work, obs);

    std::vector<std::vector<std::size_t>> cells(kAgeBandCount * 2);
    for (std::size_t i = 0; i < n; ++i) {
        if (persons[i].is_child()) continue;
        const int band = std::max(0, age_band(persons[i].age));
        cells[static_cast<std::size_t>(band) * 2 + static_cast<std::size_t>(persons[i].gender)].push_back(i);
    }
    std::vector<double> cell_share;
    for (const auto &row : totals.in_work_share)
        for (double s : row) cell_share.push_back(s);
    const auto in_work_targets = align::apportion(cell_share, scaled_count(totals.in_work_total, scale));
    std::vector<std::uint8_t> now_in_work(n, 0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto k = clamp_target(in_work_targets[c], cells[c].size(),
                                    "in-work cell " + std::string(age_band_label(static_cast<int>(c / 2))) + "/" +
                                        std::string(to_string(static_cast<Gender>(c % 2))),
                                    warnings);
        const auto sel = align_group(cells[c], base_persons, in_work_draws, k, stats.in_work_changed);
        for (std::size_t j = 0; j < cells[c].size(); ++j) now_in_work[cells[c][j]] = sel[j];
    }

    // Entrants, job losers and unemployment by gender.
    const auto employee_cov = igm::CovariateSet::parse(models.employee.covariates);
    std::array<std::size_t, 2> losers{};
    std::array<std::vector<std::size_t>, 2> pool;
    std::vector<std::uint8_t> entrant(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto &p = persons[i];
        if (p.is_child()) continue;
        const bool was = base_persons[i].in_work();
        const auto g = static_cast<std::size_t>(p.gender);
        if (now_in_work[i] && !was) {
            entrant[i] = 1;
            ++stats.entrants;
            const auto d = igm::presence_draw(probability(models.employee, employee_cov, p), seed, p.id,
                                              rng::Stream::employee);
            p.labour_state = d.flag ? LabourState::employee : LabourState::self_employed;
        } else if (!now_in_work[i] && was) {
            ++stats.job_losers;
            ++losers[g];
            p.labour_state = LabourState::unemployed;
        } else if (!was && p.labour_state != LabourState::retired) {
            pool[g].push_back(i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) obs[i] = igm::kUnobserved;
    for (const auto &gp : pool)
        for (auto i : gp) obs[i] = base_persons[i].labour_state == LabourState::unemployed ? 1 : 0;
    const auto unemp_draws = igm::simulate_presence(models.unemployed, base_persons, seed, rng::Stream::unemployed, obs);
    const std::vector<double> ushare(totals.unemployment_share.begin(), totals.unemployment_share.end());
    const auto unemp_total = scaled_count(totals.unemployed_total, scale);
    const auto unemp_targets = unemp_total > 0 ? align::apportion(ushare, unemp_total) : std::vector<std::size_t>(2, 0);
    for (std::size_t g = 0; g < 2; ++g) {
        const std::string label = "unemployment/" + std::string(to_string(static_cast<Gender>(g)));
        std::size_t k = 0;
        if (losers[g] > unemp_targets[g])
            warnings.push_back(label + ": " + std::to_string(losers[g]) + " job losers exceed the target " +
                               std::to_string(unemp_targets[g]));
        else
            k = clamp_target(unemp_targets[g] - losers[g], pool[g].size(), label, warnings);
        const auto sel = align_group(pool[g], base_persons, unemp_draws, k, stats.unemployed_changed);
        for (std::size_t j = 0; j < pool[g].size(); ++j)
            persons[pool[g][j]].labour_state = sel[j] ? LabourState::unemployed : LabourState::inactive;
    }

    // Industry and occupation among everyone in work, per gender.
    std::vector<std::size_t> workers;
    for (std::size_t i = 0; i < n; ++i)
        if (now_in_work[i]) workers.push_back(i);
    const auto base_industry = [&](std::size_t i) { return base_persons[i].industry; };
    const auto base_occupation = [&](std::size_t i) { return base_persons[i].occupation; };
    struct Dim {
        const igm::MultinomialModelParams *model;
        rng::Stream stream;
        int Person::*field;
        std::size_t *changed;
        bool industry;
    };
    const Dim dims[2] = {{&models.industry, rng::Stream::industry, &Person::industry, &stats.industry_changed, true},
                         {&models.occupation, rng::Stream::occupation, &Person::occupation, &stats.occupation_changed,
                          false}};
    for (const auto &dim : dims) {
        const auto &model = *dim.model;
        const auto cov = igm::CovariateSet::parse(model.covariates);
        const int k = model.outcome_count();
        const auto ku = static_cast<std::size_t>(k);
        std::vector<double> scores(workers.size() * ku);
        std::vector<int> argmax(workers.size());
        parallel::for_each_index(workers.size(), [&](std::size_t w) {
            const auto i = workers[w];
            Eigen::RowVectorXd x(cov.width());
            cov.fill_row(persons[i], x.data());
            std::vector<double> pr(ku);
            model.probabilities(x, pr);
            const int code = entrant[i] ? kNoCode : (dim.industry ? base_industry(i) : base_occupation(i));
            const int observed = code == kNoCode ? -1 : outcome_index(model, code);
            std::span<double> row(scores.data() + w * ku, ku);
            igm::categorical_scores(pr, seed, persons[i].id, dim.stream, observed, row);
            argmax[w] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
        });
        for (std::size_t g = 0; g < 2; ++g) {
            std::vector<std::size_t> members;
            for (std::size_t w = 0; w < workers.size(); ++w)
                if (static_cast<std::size_t>(persons[workers[w]].gender) == g) members.push_back(w);
            const auto shares = dim.industry ? totals.industry_share(static_cast<Gender>(g))
                                             : totals.occupation_share(static_cast<Gender>(g));
            std::vector<double> weights(ku, 0.0);
            double covered = 0.0;
            for (const auto &[code, share] : shares) {
                const int o = outcome_index(model, code);
                if (o < 0) continue;
                weights[static_cast<std::size_t>(o)] = share;
                covered += share;
            }
            std::vector<int> assign(members.size());
            if (members.empty()) continue;
            if (!(covered > 0.0)) {
                if (!totals.employment_share.empty())
                    warnings.push_back(std::string(dim.industry ? "industry" : "occupation") +
                                       ": no control share matches a modelled category; left unaligned");
                for (std::size_t j = 0; j < members.size(); ++j) assign[j] = argmax[members[j]];
            } else {
                if (covered < 1.0 - 1e-9)
                    warnings.push_back(std::string(dim.industry ? "industry" : "occupation") +
                                       ": control shares for unmodelled categories dropped");
                const auto targets = align::apportion(weights, members.size());
                std::vector<double> sub(members.size() * ku);
                std::vector<std::int64_t> ids(members.size());
                for (std::size_t j = 0; j < members.size(); ++j) {
                    std::copy_n(scores.begin() + static_cast<std::ptrdiff_t>(members[j] * ku), ku,
                                sub.begin() + static_cast<std::ptrdiff_t>(j * ku));
                    ids[j] = persons[workers[members[j]]].id;
                }
                assign = align::align_multinomial(sub, k, ids, targets);
            }
            for (std::size_t j = 0; j < members.size(); ++j) {
                *dim.changed += assign[j] != argmax[members[j]];
                persons[workers[members[j]]].*dim.field = model.outcomes[static_cast<std::size_t>(assign[j])];
            }
        }
    }

    // Earnings for entrants and for workers whose cell changed.
    const auto earn_cov = igm::CovariateSet::parse(models.earnings.covariates);
    parallel::for_each_index(n, [&](std::size_t i) {
        auto &p = persons[i];
        const auto &b = base_persons[i];
        if (!now_in_work[i]) {
            p.gross_earnings = 0.0;
            if (!p.in_work()) p.commute_mode = CommuteMode::none;
            return;
        }
        const bool moved = p.industry != b.industry || p.occupation != b.occupation;
        if (!entrant[i] && !moved && p.gross_earnings > 0.0) return;
        const double eta = earn_cov.linear_predictor(p, models.earnings.coef) + models.earnings_residuals.get(p.id);
        p.gross_earnings = std::max(0.01, round_cents(std::exp(eta)));
        if (entrant[i] || p.prev_gross_earnings == 0.0) {
            p.prev_gross_earnings = p.gross_earnings;
            p.prev_net_earnings = std::min(p.prev_gross_earnings, policy::net_pay(p.gross_earnings, params));
            if (p.commute_mode == CommuteMode::none) p.commute_mode = CommuteMode::car;
        }
    });

    // CWS take-up among eligible employees, then PUP among the unemployed.
    std::vector<std::uint8_t> was_cws(n), was_pup(n);
    std::vector<std::size_t> cws_pool, pup_pool;
    for (std::size_t i = 0; i < n; ++i) {
        auto &p = persons[i];
        was_cws[i] = base_persons[i].receives_cws;
        was_pup[i] = base_persons[i].receives_pup;
        p.receives_cws = false;
        p.receives_pup = false;
        if (p.labour_state == LabourState::employee && p.prev_gross_earnings > 0.0 &&
            p.prev_gross_earnings < options.cws_earnings_ceiling && p.industry != kNoCode)
            cws_pool.push_back(i);
        if (p.labour_state == LabourState::unemployed && p.prev_gross_earnings > 0.0 && p.industry != kNoCode)
            pup_pool.push_back(i);
    }
    assign_takeup(persons, cws_pool, totals.cws_takeup, scale, seed, rng::Stream::cws_takeup, &Person::receives_cws,
                  was_cws, "CWS take-up", warnings, stats.cws_recipients);
    assign_takeup(persons, pup_pool, totals.pup_takeup, scale, seed, rng::Stream::pup_takeup, &Person::receives_pup,
                  was_pup, "PUP take-up", warnings, stats.pup_recipients);

    std::vector<Household> households(base.households().begin(), base.households().end());
    res.population = PopulationSnapshot(std::move(persons), std::move(households));
    return res;
}

StageResult index_returns_and_prices(const PopulationSnapshot &pop, const ControlTotals &totals,
                                     const policy::TaxBenefitParams &params, std::uint64_t seed,
                                     const PriceOptions &options) {
    if (!(options.capital_yield > 0.0)) throw ConfigError("capital yield must be positive");
    StageResult res;
    auto &warnings = res.warnings;
    std::vector<Person> persons(pop.persons().begin(), pop.persons().end());
    std::vector<Household> households(pop.households().begin(), pop.households().end());
    const auto n = persons.size();

    std::size_t missing = 0;
    for (auto &p : persons) {
        if (p.gross_earnings <= 0.0 && p.prev_gross_earnings <= 0.0) continue;
        if (totals.earnings_index.empty()) break;
        const auto it = totals.earnings_index.find({p.industry, p.occupation});
        if (it == totals.earnings_index.end()) {
            ++missing;
            continue;
        }
        const double f = it->second;
        if (f == 1.0) continue;
        p.gross_earnings = round_cents(p.gross_earnings * f);
        p.prev_gross_earnings = round_cents(p.prev_gross_earnings * f);
        p.prev_net_earnings = std::min(p.prev_gross_earnings, policy::net_pay(p.prev_gross_earnings, params));
    }
    if (missing > 0)
        warnings.push_back(std::to_string(missing) + " persons in industry/occupation cells without an earnings factor; factor 1 used");

    if (totals.mean_earnings_target) {
        std::vector<std::size_t> earners;
        std::vector<double> gross;
        for (std::size_t i = 0; i < n; ++i)
            if (persons[i].in_work() && persons[i].gross_earnings > 0.0) {
                earners.push_back(i);
                gross.push_back(persons[i].gross_earnings);
            }
        if (!earners.empty()) {
            const auto aligned = align::align_continuous_mean(gross, *totals.mean_earnings_target);
            for (std::size_t k = 0; k < earners.size(); ++k)
                persons[earners[k]].gross_earnings = std::max(0.01, round_cents(aligned[k]));
        }
    }

    if (totals.has_holding_rates) {
        // Household income quintile from equivalized market income.
        std::vector<double> hh_income(households.size(), 0.0), hh_weight(households.size());
        for (std::size_t h = 0; h < households.size(); ++h) {
            double sum = 0.0;
            for (auto i : pop.member_indices(h)) {
                const auto &p = persons[i];
                sum += p.gross_earnings;
                for (std::size_t s = 0; s < kIncomeSourceCount; ++s)
                    if (static_cast<IncomeSource>(s) != IncomeSource::state_pension) sum += p.income_sources[s].level;
            }
            hh_income[h] = sum / std::sqrt(static_cast<double>(households[h].size()));
            hh_weight[h] = households[h].weight;
        }
        const auto quintile = ind::quantile_groups(hh_income, hh_weight, kIncomeQuintiles);

        std::vector<std::vector<std::size_t>> cells(kAgeBandCount * kIncomeQuintiles);
        Eigen::MatrixXd seed_m = Eigen::MatrixXd::Constant(kAgeBandCount, kIncomeQuintiles, 0.5);
        Eigen::VectorXd band_n = Eigen::VectorXd::Zero(kAgeBandCount), quint_n = Eigen::VectorXd::Zero(kIncomeQuintiles);
        std::vector<std::uint8_t> holder(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto &p = persons[i];
            if (p.is_child()) continue;
            const auto b = static_cast<Eigen::Index>(std::max(0, age_band(p.age)));
            const auto q = static_cast<Eigen::Index>(quintile[pop.household_index_of(i)] - 1);
            cells[static_cast<std::size_t>(b * kIncomeQuintiles + q)].push_back(i);
            band_n[b] += 1.0;
            quint_n[q] += 1.0;
            holder[i] = p.source(IncomeSource::capital).present;
            if (holder[i]) seed_m(b, q) += 1.0;
        }
        align::IpfProblem prob;
        prob.seed = seed_m;
        prob.row_margins.resize(kAgeBandCount);
        prob.col_margins.resize(kIncomeQuintiles);
        for (int b = 0; b < kAgeBandCount; ++b)
            prob.row_margins[b] = totals.holding_rate_by_age[static_cast<std::size_t>(b)] * band_n[b];
        for (int q = 0; q < kIncomeQuintiles; ++q)
            prob.col_margins[q] = totals.holding_rate_by_quintile[static_cast<std::size_t>(q)] * quint_n[q];
        const double rows_total = prob.row_margins.sum(), cols_total = prob.col_margins.sum();
        if (rows_total > 0.0 && cols_total > 0.0) {
            if (std::abs(rows_total - cols_total) > 0.01 * rows_total)
                warnings.push_back("holding rates by age and by income quintile imply different totals; quintile margins rescaled");
            prob.col_margins *= rows_total / cols_total;
            for (Eigen::Index b = 0; b < prob.seed.rows(); ++b)
                if (band_n[b] == 0.0) prob.seed.row(b).setZero();
            for (Eigen::Index q = 0; q < prob.seed.cols(); ++q)
                if (quint_n[q] == 0.0) prob.seed.col(q).setZero();
            const auto fit = align::ipf(prob);
            std::vector<double> flat(cells.size());
            for (int b = 0; b < kAgeBandCount; ++b)
                for (int q = 0; q < kIncomeQuintiles; ++q)
                    flat[static_cast<std::size_t>(b * kIncomeQuintiles + q)] = std::max(0.0, fit.fitted(b, q));
            const auto targets = align::apportion(flat, static_cast<std::size_t>(std::llround(rows_total)));

            std::vector<double> levels;
            for (std::size_t i = 0; i < n; ++i)
                if (holder[i]) levels.push_back(persons[i].source(IncomeSource::capital).level);
            double typical = 1.0;
            if (!levels.empty()) {
                auto mid = levels.begin() + static_cast<std::ptrdiff_t>(levels.size() / 2);
                std::nth_element(levels.begin(), mid, levels.end());
                typical = *mid;
            }
            for (std::size_t c = 0; c < cells.size(); ++c) {
                const auto &units = cells[c];
                const auto k = clamp_target(targets[c], units.size(), "share holders cell " + std::to_string(c), warnings);
                std::vector<double> p(units.size(), 0.5), u(units.size());
                std::vector<std::int64_t> ids(units.size());
                for (std::size_t j = 0; j < units.size(); ++j) {
                    ids[j] = persons[units[j]].id;
                    u[j] = igm::presence_draw(0.5, seed, ids[j], rng::Stream::share_holding, holder[units[j]] ? 1 : 0).u;
                }
                const auto sel = align::align_binary(p, u, ids, k);
                for (std::size_t j = 0; j < units.size(); ++j) {
                    const auto i = units[j];
                    if (static_cast<bool>(sel[j]) == static_cast<bool>(holder[i])) continue;
                    auto &src = persons[i].source(IncomeSource::capital);
                    auto &hh = households[pop.household_index_of(i)];
                    const double delta = sel[j] ? typical : -src.level;
                    src = sel[j] ? SourceIncome{true, typical} : SourceIncome{};
                    hh.capital_value = std::max(0.0, round_cents(hh.capital_value + delta * 52.0 / options.capital_yield));
                }
            }
        }
    }
    res.population = PopulationSnapshot(std::move(persons), std::move(households));
    return res;
}

} // namespace wsim
