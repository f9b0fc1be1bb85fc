#include "wsim/scenario/pipeline.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/hash.hpp"
#include "wsim/policy/budget.hpp"
#include "wsim/policy/household_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class F>
auto stage(const std::string &name, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError &) {
        throw;
    } catch (const std::exception &e) {
        throw StageError(name, e.what());
    }
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Deciles of equivalized pre-transfer household income: labour income
/// (previous gross for CWS recipients) plus non-pension sources.
std::vector<int> childcare_deciles(const PopulationSnapshot &pop) {
    const auto persons = pop.persons();
    const auto hh = pop.households();
    std::vector<double> income(hh.size()), weight(hh.size());
    for (std::size_t h = 0; h < hh.size(); ++h) {
        double sum = 0.0;
        for (auto i : pop.member_indices(h)) {
            const auto &p = persons[i];
            sum += p.receives_cws ? p.prev_gross_earnings : p.gross_earnings;
            for (std::size_t s = 0; s < kIncomeSourceCount; ++s)
                if (static_cast<IncomeSource>(s) != IncomeSource::state_pension) sum += p.income_sources[s].level;
        }
        income[h] = sum / std::sqrt(static_cast<double>(hh[h].size()));
        weight[h] = hh[h].weight;
    }
    return ind::decile_groups(income, weight);
}

std::string microdata_csv(const PopulationSnapshot &pop, const std::string &design,
                          std::span<const policy::HouseholdOutcome> outcomes, MicrodataScope scope, bool header) {
    std::ostringstream out;
    if (header)
        csv::write_row(out, {"design", "household_id", "weight", "size", "market", "taxes", "benefits", "housing",
                             "capital_loss", "commuting", "childcare", "cws", "pup", "equivalized_adjusted"});
    const auto persons = pop.persons();
    for (std::size_t h = 0; h < outcomes.size(); ++h) {
        if (scope == MicrodataScope::recipients) {
            const auto m = pop.member_indices(h);
            if (std::none_of(m.begin(), m.end(), [&](std::size_t i) { return persons[i].receives_cws; })) continue;
        }
        const auto &hh = pop.households()[h];
        const auto &o = outcomes[h];
        const auto &c = o.components;
        const auto f = [](double v) { return ind::format_fixed(v, 2); };
        csv::write_row(out, {design, std::to_string(hh.id), csv::format_double(hh.weight), std::to_string(hh.size()),
                             f(c.market), f(c.taxes), f(c.benefits), f(c.housing), f(c.capital_loss), f(c.commuting),
                             f(c.childcare), f(o.cws), f(o.pup), ind::format_fixed(c.equivalized(), 4)});
    }
    return out.str();
}

json stats_json(const LabourMarketStats &s) {
    return {{"in_work_changed", s.in_work_changed},       {"unemployed_changed", s.unemployed_changed},
            {"industry_changed", s.industry_changed},     {"occupation_changed", s.occupation_changed},
            {"entrants", s.entrants},                     {"job_losers", s.job_losers},
            {"cws_recipients", s.cws_recipients},         {"pup_recipients", s.pup_recipients}};
}

std::string file_hash(const fs::path &p) { return fnv1a_hex(csv::read_file(p)); }

} // namespace

policy::PupSchedule shift_payments(const policy::PupSchedule &schedule, double euros) {
    auto out = schedule;
    if (euros == 0.0) return out;
    const auto delta = Cents::from_euros(euros);
    for (auto &band : out.bands) {
        if (band.rule.kind != policy::PaymentRule::Kind::flat)
            throw ConfigError("schedule " + schedule.id + ": payment shifts apply to flat bands only");
        band.rule.amount += delta;
    }
    out.validate();
    return out;
}

RunResult compute_scenario(const ScenarioConfig &config) {
    RunResult run;
    stage("config", [&] { config.validate(); });

    const auto base = stage("population", [&] {
        if (config.population.file) return load_population(*config.population.file);
        // Observed net pay is generated under the baseline system so reforms share one base population.
        const policy::TaxBenefitParams baseline;
        return generate_synthetic(config.population.spec, config.population.persons, config.population.seed,
                                  [&baseline](double g) { return policy::net_pay(g, baseline); });
    });
    run.base_fingerprint = base.fingerprint();
    for (const auto &w : base.warnings()) run.warnings.push_back("population: " + w);

    std::vector<ControlTotals> totals;
    stage("control_totals", [&] {
        for (const auto &w : config.waves) totals.push_back(load_control_totals(w.control_totals));
    });
    std::optional<ChildcareTable> childcare;
    if (config.childcare_margins)
        childcare = stage("childcare", [&] { return load_childcare_table(*config.childcare_margins); });

    std::vector<policy::PupSchedule> pups;
    stage("config", [&] {
        for (const auto &d : config.designs) pups.push_back(shift_payments(d.pup, config.pup_band_shift));
    });

    const auto models = stage("estimation", [&] {
        EstimationOptions opts;
        opts.sample_cap = config.estimation_sample_cap;
        return estimate_models(base, config.seed, opts);
    });
    for (const auto &w : models.warnings) run.warnings.push_back("estimation: " + w);

    // Compensation rates depend only on the schedule.
    std::vector<std::string> table1_labels;
    stage("indicators", [&] {
        ind::CompensationOptions opts;
        opts.employer_topup_share = config.employer_topup_share;
        opts.upper = config.cws_earnings_ceiling;
        for (const auto &d : config.designs) {
            if (std::any_of(run.compensation.begin(), run.compensation.end(),
                            [&](const ind::CompensationPanel &p) { return p.design == d.cws.id; }))
                continue;
            run.compensation.push_back(ind::compensation_panel(d.cws, config.tax, opts));
            table1_labels.push_back(d.cws.label.empty() ? d.cws.id : d.cws.label);
        }
        for (const auto &p : run.compensation) run.indicators.append(p.table());
    });

    std::vector<std::string> design_labels;
    for (const auto &d : config.designs) design_labels.push_back(d.label);

    for (std::size_t w = 0; w < config.waves.size(); ++w) {
        WaveResult wr;
        wr.wave = config.waves[w];
        const auto &ct = totals[w];
        auto s1 = stage("labour_market", [&] {
            LabourMarketOptions o;
            o.cws_earnings_ceiling = config.cws_earnings_ceiling;
            return simulate_labour_market(base, models, ct, config.tax, config.seed, o);
        });
        wr.stats = s1.stats;
        for (const auto &m : s1.warnings) wr.warnings.push_back("labour_market: " + m);
        auto s2 = stage("returns_prices", [&] {
            PriceOptions o;
            o.capital_yield = config.capital_yield;
            return index_returns_and_prices(s1.population, ct, config.tax, config.seed, o);
        });
        for (const auto &m : s2.warnings) wr.warnings.push_back("returns_prices: " + m);
        const auto &pop = s2.population;
        wr.population_fingerprint = pop.fingerprint();

        std::string micro;
        stage("policy", [&] {
            const auto deciles = childcare ? childcare_deciles(pop) : std::vector<int>{};
            for (std::size_t d = 0; d < config.designs.size(); ++d) {
                const auto &design = config.designs[d];
                policy::PolicyContext ctx;
                ctx.cws = &design.cws;
                ctx.pup = &pups[d];
                ctx.params = &config.tax;
                ctx.employer_topup_share = config.employer_topup_share;
                ctx.capital_index_change = ct.capital_index_change;
                if (childcare) {
                    ctx.childcare = &*childcare;
                    ctx.childcare_deciles = deciles;
                }
                const auto outcomes = policy::evaluate_population(pop, ctx);
                const auto recipients = ind::recipient_outcomes(pop, ctx, outcomes);
                DesignResult dr;
                dr.design = design.id;
                dr.rr_net = ind::net_replacement_panel(recipients);
                dr.rr_rel = ind::relative_replacement_bands(recipients);
                dr.table4 = ind::table4_panel(pop, outcomes, config.kakwani);
                if (dr.rr_net.excluded > 0)
                    wr.warnings.push_back("policy: " + design.id + ": " + std::to_string(dr.rr_net.excluded) +
                                          " recipients with nonpositive in-work income excluded");
                if (config.microdata != MicrodataScope::none)
                    micro += microdata_csv(pop, design.id, outcomes, config.microdata, d == 0);
                wr.designs.push_back(std::move(dr));
            }
        });
        stage("indicators", [&] {
            const std::string suffix = "@" + wr.wave.id;
            std::vector<ind::NetReplacementPanel> nets;
            std::vector<ind::RelativeReplacementBands> rels;
            for (const auto &dr : wr.designs) {
                run.indicators.append(dr.rr_net.table(dr.design + suffix));
                run.indicators.append(dr.rr_rel.table(dr.design + suffix));
                run.indicators.append(dr.table4.table(dr.design + suffix));
                nets.push_back(dr.rr_net);
                rels.push_back(dr.rr_rel);
            }
            const auto s = stats_json(wr.stats);
            for (const auto &[k, v] : s.items())
                run.indicators.add("labour_market" + suffix, k, v.get<double>(), "units");
            run.files["table2_" + wr.wave.id + ".csv"] = ind::table2(nets, design_labels).to_csv();
            run.files["table3_" + wr.wave.id + ".csv"] = ind::table3(rels, design_labels).to_csv();
            std::vector<std::vector<ind::Table4Values>> t4(1);
            for (const auto &dr : wr.designs) t4[0].push_back(dr.table4);
            run.files["table4_" + wr.wave.id + ".csv"] = ind::table4(t4, design_labels).to_csv();
            if (config.microdata != MicrodataScope::none) run.files["households_" + wr.wave.id + ".csv"] = micro;
        });
        run.waves.push_back(std::move(wr));
    }

    stage("indicators", [&] {
        run.files["table1.csv"] = ind::table1(run.compensation, table1_labels).to_csv();
        for (std::size_t i = 0; i < run.compensation.size(); ++i) {
            const auto &p = run.compensation[i];
            run.files["table1_" + p.design + ".csv"] =
                ind::table1(std::span(&p, 1), std::span(&table1_labels[i], 1)).to_csv();
            run.files["compensation_" + p.design + ".csv"] = p.table().to_csv();
        }
        std::vector<std::vector<ind::RelativeReplacementBands>> t7;
        std::vector<std::vector<ind::Table4Values>> t8;
        for (const auto &wr : run.waves) {
            t7.emplace_back();
            t8.emplace_back();
            for (const auto &dr : wr.designs) {
                t7.back().push_back(dr.rr_rel);
                t8.back().push_back(dr.table4);
            }
        }
        run.files["table7.csv"] = ind::table7(t7, design_labels).to_csv();
        run.files["table8.csv"] = ind::table4(t8, design_labels).to_csv();
        run.files[kIndicatorsName] = run.indicators.to_csv();
    });

    stage("manifest", [&] {
        json m;
        const auto cfg = to_json(config);
        m["tool"] = "wsim";
        m["version"] = WSIM_VERSION;
        m["config"] = cfg;
        m["config_hash"] = fnv1a_hex(cfg.dump());
        m["seed"] = config.seed;
        m["base_population_fingerprint"] = hex(run.base_fingerprint);
        json inputs;
        if (config.population.file) inputs["population"] = file_hash(*config.population.file);
        for (const auto &w : config.waves) inputs["control_totals"][w.id] = file_hash(w.control_totals);
        if (config.childcare_margins) inputs["childcare_margins"] = file_hash(*config.childcare_margins);
        m["inputs"] = inputs;
        m["waves"] = json::array();
        for (const auto &wr : run.waves)
            m["waves"].push_back({{"id", wr.wave.id},
                                  {"label", wr.wave.label},
                                  {"population_fingerprint", hex(wr.population_fingerprint)},
                                  {"stats", stats_json(wr.stats)},
                                  {"warnings", wr.warnings}});
        m["warnings"] = run.warnings;
        json files = json::object();
        for (const auto &[name, content] : run.files) files[name] = fnv1a_hex(content);
        m["files"] = files;
        run.files[kManifestName] = m.dump(2) + "\n";
    });
    return run;
}

RunResult run_scenario(const ScenarioConfig &config, const fs::path &out) {
    auto run = compute_scenario(config);
    const auto target = fs::absolute(out).lexically_normal();
    const auto tmp = target.parent_path() / (target.filename().string() + ".partial");
    try {
        fs::remove_all(tmp);
        fs::create_directories(tmp);
        for (const auto &[name, content] : run.files) {
            std::ofstream f(tmp / name, std::ios::binary);
            f << content;
            if (!f) throw Error("cannot write " + (tmp / name).string());
        }
        fs::remove_all(target);
        fs::rename(tmp, target);
    } catch (const std::exception &e) {
        std::error_code ec;
        fs::remove_all(tmp, ec);
        throw StageError("write", e.what());
    }
    return run;
}

std::vector<fs::path> emit_budget_constraints(const ScenarioConfig &config, const fs::path &out_dir) {
    return stage("curves", [&] {
        config.validate();
        const auto grid = policy::make_grid(config.curves.from, config.curves.to, config.curves.step);
        fs::create_directories(out_dir);
        std::vector<fs::path> written;
        for (const auto &d : config.designs) {
            const auto pup = shift_payments(d.pup, config.pup_band_shift);
            const auto curve = policy::budget_constraint(d.cws, pup, config.tax, grid, config.employer_topup_share,
                                                         config.curves.children);
            const auto path = out_dir / ("budget_" + d.id + ".csv");
            std::ofstream f(path, std::ios::binary);
            f << policy::format_curve_csv(curve);
            if (!f) throw Error("cannot write " + path.string());
            written.push_back(path);
        }
        return written;
    });
}

} // namespace wsim
