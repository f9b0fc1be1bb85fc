#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"
#include "wsim/scenario/compare.hpp"
#include "wsim/scenario/config.hpp"
#include "wsim/scenario/labour_market.hpp"
#include "wsim/policy/schedule_io.hpp"
#include "wsim/scenario/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace wsim;
namespace fs = std::filesystem;

namespace {

const fs::path kData = WSIM_TEST_DATA_DIR;

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("wsim_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

nlohmann::json small_config(std::size_t persons = 4000) {
    return {{"name", "unit"},
            {"seed", 99},
            {"population", {{"synthetic", {{"persons", persons}, {"seed", 3}}}}},
            {"waves", {{{"id", "may2020"}, {"label", "1st wave"}, {"control_totals", (kData / "waves/may2020.csv").string()}}}},
            {"designs", {"ECRS", "EWSS_Oct"}},
            {"childcare_margins", (kData / "childcare_margins.csv").string()}};
}

ControlTotals totals_from(const PopulationSnapshot &pop) {
    ControlTotals ct;
    ct.period = "base";
    ct.reference_population = static_cast<double>(pop.size());
    std::array<double, 2> unemp{};
    std::array<std::array<double, 2>, kAgeBandCount> cells{};
    double workers = 0.0;
    for (const auto &p : pop.persons()) {
        if (p.is_child()) continue;
        const auto g = static_cast<std::size_t>(p.gender);
        if (p.in_work()) {
            workers += 1.0;
            cells[static_cast<std::size_t>(std::max(0, age_band(p.age)))][g] += 1.0;
            ct.employment_share[{p.industry, p.occupation, static_cast<int>(p.gender)}] += 1.0;
        } else if (p.labour_state == LabourState::unemployed) {
            unemp[g] += 1.0;
        }
        if (p.receives_cws) ct.cws_takeup[p.industry] += 1.0;
        if (p.receives_pup) ct.pup_takeup[p.industry] += 1.0;
    }
    ct.in_work_total = workers;
    ct.unemployed_total = unemp[0] + unemp[1];
    for (std::size_t b = 0; b < cells.size(); ++b)
        for (std::size_t g = 0; g < 2; ++g) ct.in_work_share[b][g] = cells[b][g] / workers;
    for (auto &[k, v] : ct.employment_share) v /= workers;
    ct.unemployment_share = {unemp[0] / ct.unemployed_total, unemp[1] / ct.unemployed_total};
    return ct;
}

} // namespace

TEST(Config, ParsesAndValidates) {
    const auto c = parse_config(small_config(), kData);
    EXPECT_EQ(c.designs.size(), 2u);
    EXPECT_EQ(c.designs[0].cws.id, "ECRS");
    EXPECT_EQ(c.waves.size(), 1u);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, ErrorsAreConfigErrors) {
    auto j = small_config();
    j["designs"] = {"NOPE"};
    EXPECT_THROW(parse_config(j, kData), ConfigError);
    auto k = small_config();
    k["waves"][0]["control_totals"] = "/nonexistent/totals.csv";
    EXPECT_THROW(parse_config(k, kData).validate(), ConfigError);
    auto m = small_config();
    m["employer_topup_share"] = 2.0;
    EXPECT_THROW(parse_config(m, kData).validate(), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/scenario.json"), ConfigError);
}

TEST(Config, SelfContainedJsonRoundTrip) {
    const auto c = parse_config(small_config(), kData);
    const auto j = to_json(c);
    EXPECT_FALSE(j.contains("output_dir"));
    EXPECT_EQ(to_json(parse_config(j, "/")), j);
}

TEST(Config, ShippedExampleValidates) {
    const auto c = load_config(kData / "examples/scenario.json");
    EXPECT_EQ(c.waves.size(), 3u);
    EXPECT_EQ(c.designs.size(), 5u);
    EXPECT_NO_THROW(c.validate());
}

TEST(LabourMarket, FixedPointWhenTotalsMatchBase) {
    const auto base = generate_synthetic(SyntheticSpec{}, 20000, 12);
    const auto models = estimate_models(base, 5);
    const auto totals = totals_from(base);
    const policy::TaxBenefitParams params;
    const auto r = simulate_labour_market(base, models, totals, params, 5);
    EXPECT_EQ(r.stats.in_work_changed, 0u);
    EXPECT_EQ(r.stats.unemployed_changed, 0u);
    EXPECT_EQ(r.stats.industry_changed, 0u);
    EXPECT_EQ(r.stats.occupation_changed, 0u);
    EXPECT_EQ(r.stats.entrants, 0u);
    EXPECT_EQ(r.stats.job_losers, 0u);
    for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_EQ(r.population.persons()[i].labour_state, base.persons()[i].labour_state);
        EXPECT_EQ(r.population.persons()[i].industry, base.persons()[i].industry);
    }
}

TEST(LabourMarket, AlignedCountsHitIntegerTargets) {
    const auto base = generate_synthetic(SyntheticSpec{}, 20000, 13);
    const auto models = estimate_models(base, 6);
    auto totals = totals_from(base);
    const double lost = std::round(0.1 * totals.in_work_total);
    totals.in_work_total -= lost;
    totals.unemployed_total = 2.0 * (totals.unemployed_total + lost);
    const policy::TaxBenefitParams params;
    const auto r = simulate_labour_market(base, models, totals, params, 6);
    std::size_t in_work = 0, unemployed = 0;
    for (const auto &p : r.population.persons()) {
        in_work += p.in_work();
        unemployed += p.labour_state == LabourState::unemployed;
    }
    EXPECT_EQ(in_work, static_cast<std::size_t>(std::llround(totals.in_work_total)));
    EXPECT_EQ(unemployed, static_cast<std::size_t>(std::llround(totals.unemployed_total)));
    EXPECT_EQ(r.stats.job_losers, static_cast<std::size_t>(lost));
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Pipeline, DeterministicBundles) {
    const auto c = parse_config(small_config(), kData);
    const auto a = compute_scenario(c);
    const auto b = compute_scenario(c);
    EXPECT_EQ(a.files, b.files);
    EXPECT_TRUE(a.files.count(kManifestName));
    EXPECT_TRUE(a.files.count("table1.csv"));
    EXPECT_TRUE(a.files.count("table4_may2020.csv"));
    for (const char *id : {"ECRS", "EWSS_Oct"}) EXPECT_TRUE(a.files.count(std::string("table1_") + id + ".csv"));
}

TEST(Pipeline, ManifestReproducesRun) {
    const auto c = parse_config(small_config(), kData);
    const auto out = scratch("manifest");
    const auto a = run_scenario(c, out / "a");
    const auto again = load_config(out / "a" / kManifestName);
    const auto b = run_scenario(again, out / "b");
    EXPECT_EQ(a.files, b.files);
    fs::remove_all(out);
}

TEST(Pipeline, StageErrorNamesStageAndLeavesNothing) {
    const auto dir = scratch("stage");
    {
        std::ofstream f(dir / "bad.csv");
        f << "[meta]\nkey,value\nperiod,x\n";
    }
    auto j = small_config();
    j["waves"][0]["control_totals"] = (dir / "bad.csv").string();
    const auto c = parse_config(j, kData);
    try {
        run_scenario(c, dir / "out");
        FAIL() << "expected StageError";
    } catch (const StageError &e) {
        EXPECT_EQ(e.stage(), "control_totals");
        EXPECT_NE(std::string(e.what()).find("[control_totals]"), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(dir / "out"));
    EXPECT_FALSE(fs::exists(dir / "out.partial"));
    fs::remove_all(dir);
}

TEST(Compare, IdenticalBundlesHaveZeroDeltas) {
    const auto c = parse_config(small_config(), kData);
    const auto out = scratch("compare_same");
    run_scenario(c, out / "a");
    const auto report = compare_runs(out / "a", out / "a");
    EXPECT_FALSE(report.rows.empty());
    EXPECT_EQ(report.flagged, 0u);
    for (const auto &r : report.rows)
        if (!std::isnan(r.delta)) EXPECT_EQ(r.delta, 0.0);
    fs::remove_all(out);
}

TEST(Compare, RaisedPupWeaklyRaisesHighReplacementShare) {
    auto base = parse_config(small_config(), kData);
    auto raised = base;
    raised.pup_band_shift = 50.0;
    const auto out = scratch("compare_pup");
    run_scenario(base, out / "a");
    run_scenario(raised, out / "b");
    const auto report = compare_runs(out / "a", out / "b");
    std::size_t seen = 0;
    for (const auto &r : report.rows)
        if (r.indicator.rfind("rr_rel:", 0) == 0 && r.group == ">=100") {
            EXPECT_GE(r.delta, 0.0) << r.indicator;
            ++seen;
        }
    EXPECT_EQ(seen, 2u);
    fs::remove_all(out);
}

TEST(Compare, DoubledTaxesReportGiniDeltas) {
    auto base = parse_config(small_config(), kData);
    auto taxed = base;
    for (auto &b : taxed.tax.income_tax_bands) b.rate = std::min(1.0, 2.0 * b.rate);
    const auto out = scratch("compare_tax");
    run_scenario(base, out / "a");
    run_scenario(taxed, out / "b");
    const auto report = compare_runs(out / "a", out / "b");
    bool found = false;
    for (const auto &r : report.rows)
        if (r.indicator.rfind("table4:", 0) == 0 && r.group == "row_3") found = found || r.delta != 0.0;
    EXPECT_TRUE(found);
    fs::remove_all(out);
}

TEST(Compare, DifferentSeedsRejected) {
    auto a = parse_config(small_config(), kData);
    auto b = a;
    b.seed = a.seed + 1;
    const auto out = scratch("compare_seed");
    run_scenario(a, out / "a");
    run_scenario(b, out / "b");
    EXPECT_THROW(compare_runs(out / "a", out / "b"), ValidationError);
    fs::remove_all(out);
}

TEST(Curves, OneFilePerDesignAndSinglePointGrid) {
    auto j = small_config();
    j["designs"] = {"ECRS", "trTWSS", "opTWSS_May", "EWSS_Sep", "EWSS_Oct"};
    auto c = parse_config(j, kData);
    const auto out = scratch("curves");
    EXPECT_EQ(emit_budget_constraints(c, out).size(), 5u);
    const auto ecrs = csv::read_table(out / "budget_ECRS.csv");
    const auto col = ecrs.column("subsidy");
    ASSERT_TRUE(col.has_value());
    for (const auto &row : ecrs.rows) EXPECT_EQ(csv::parse_double(row[*col], "subsidy"), 203.0);
    c.curves.from = 500;
    c.curves.to = 500;
    emit_budget_constraints(c, out);
    EXPECT_EQ(csv::read_table(out / "budget_EWSS_Oct.csv").rows.size(), 1u);
    fs::remove_all(out);
}

TEST(ShiftPayments, FlatBandsOnly) {
    const policy::PresetRegistry presets(policy::default_preset_dir());
    const auto shifted = shift_payments(presets.pup("PUP_17Sep"), 50.0);
    EXPECT_EQ(policy::pup_payment(shifted, 350.0).euros(), 350.0);
    EXPECT_THROW(shift_payments(presets.cws("trTWSS"), 50.0), ConfigError);
}
