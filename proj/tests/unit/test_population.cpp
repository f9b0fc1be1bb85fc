#include "helpers.hpp"

#include "wsim/core/error.hpp"
#include "wsim/population/control_totals.hpp"
#include "wsim/population/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace wsim;

namespace {

PopulationSnapshot three_person_population() {
    std::vector<Person> persons{test::employee(1, 10, 600, 480), test::adult(2, 10), test::employee(3, 11, 300, 260)};
    persons[1].labour_state = LabourState::unemployed;
    persons[1].prev_gross_earnings = 400;
    persons[1].prev_net_earnings = 340;
    persons[1].receives_pup = true;
    persons[2].receives_cws = true;
    std::vector<Household> households{test::household(10, {1, 2}, 150.0), test::household(11, {3}, 90.0)};
    return PopulationSnapshot(std::move(persons), std::move(households));
}

std::string replace_field(const std::string &text, std::size_t data_row, const std::string &column,
                          const std::string &value) {
    std::istringstream in(text);
    std::string line, out;
    std::getline(in, line);
    const auto &cols = PopulationSchema::columns();
    const auto c = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), column) - cols.begin());
    out = line + "\n";
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (row == data_row) {
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string f;
            while (std::getline(ss, f, ',')) fields.push_back(f);
            fields.resize(cols.size());
            fields[c] = value;
            line.clear();
            for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + fields[i];
        }
        out += line + "\n";
    }
    return out;
}

} // namespace

TEST(Population, ParsesWellFormedFile) {
    const auto text = format_population(three_person_population());
    const auto pop = parse_population(text);
    EXPECT_EQ(pop.size(), 3u);
    EXPECT_EQ(pop.households().size(), 2u);
    EXPECT_EQ(pop.households()[0].n_adults, 2);
}

TEST(Population, NetAbovePreviousGrossCitesRow) {
    const auto text = replace_field(format_population(three_person_population()), 2, "prev_net_earnings", "500");
    try {
        parse_population(text);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        EXPECT_EQ(e.row(), 2u);
    }
}

TEST(Population, NegativeEarningsCitesRow) {
    const auto text = replace_field(format_population(three_person_population()), 3, "gross_earnings", "-1");
    try {
        parse_population(text);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        EXPECT_EQ(e.row(), 3u);
    }
}

TEST(Population, MissingColumnIsSchemaError) {
    std::string text = format_population(three_person_population());
    text.replace(text.find("housing_cost"), 12, "housing");
    EXPECT_THROW(parse_population(text), SchemaError);
}

TEST(Population, RenamedColumnsFollowSchema) {
    PopulationSchema schema;
    schema.rename["housing_cost"] = "rent";
    const auto pop = three_person_population();
    const auto text = format_population(pop, schema);
    EXPECT_NE(text.find("rent"), std::string::npos);
    EXPECT_EQ(parse_population(text, schema), pop);
}

TEST(Population, HeaderOnlyFileGivesEmptySnapshotWithWarning) {
    std::string text = format_population(three_person_population());
    text = text.substr(0, text.find('\n') + 1);
    const auto pop = parse_population(text);
    EXPECT_TRUE(pop.empty());
    EXPECT_FALSE(pop.warnings().empty());
}

TEST(Population, WriteLoadRoundTrip) {
    const auto pop = generate_synthetic(SyntheticSpec{}, 2000, 5);
    const auto path = std::filesystem::temp_directory_path() / "wsim_roundtrip.csv";
    write_population(pop, path);
    const auto back = load_population(path);
    EXPECT_EQ(back, pop);
    EXPECT_EQ(back.fingerprint(), pop.fingerprint());
    std::filesystem::remove(path);
}

TEST(Population, RejectsInvariantViolations) {
    auto persons = std::vector<Person>{test::adult(1, 10)};
    persons[0].receives_cws = true;
    EXPECT_THROW(PopulationSnapshot(persons, {test::household(10, {1})}), ValidationError);
    auto child_only = std::vector<Person>{test::adult(1, 10, 8)};
    EXPECT_THROW(PopulationSnapshot(child_only, {test::household(10, {1})}), ValidationError);
    auto ok = std::vector<Person>{test::adult(1, 10)};
    EXPECT_THROW(PopulationSnapshot(ok, {test::household(10, {1}, -5.0)}), ValidationError);
    EXPECT_THROW(PopulationSnapshot(ok, {test::household(10, {2})}), ValidationError);
}

TEST(Synthetic, DeterministicForSameInputs) {
    const auto a = generate_synthetic(SyntheticSpec{}, 1000, 7);
    const auto b = generate_synthetic(SyntheticSpec{}, 1000, 7);
    EXPECT_EQ(a, b);
    EXPECT_EQ(format_population(a), format_population(b));
    const auto c = generate_synthetic(SyntheticSpec{}, 1000, 8);
    EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(Synthetic, ExactSizeAndValidInvariants) {
    const auto pop = generate_synthetic(SyntheticSpec{}, 5001, 3);
    EXPECT_EQ(pop.size(), 5001u);
    for (const auto &p : pop.persons()) EXPECT_FALSE(check_invariants(p).has_value());
    for (const auto &h : pop.households()) EXPECT_FALSE(check_invariants(h).has_value());
}

TEST(Synthetic, FullEmploymentSpec) {
    SyntheticSpec spec;
    spec.employment_rate = {1.0, 1.0};
    spec.elderly_employment_rate = 1.0;
    spec.employee_share = 1.0;
    const auto pop = generate_synthetic(spec, 3000, 2);
    for (const auto &p : pop.persons())
        if (!p.is_child()) EXPECT_EQ(p.labour_state, LabourState::employee);
}

TEST(Synthetic, LognormalEarningsMean) {
    SyntheticSpec spec;
    spec.education_log_effect = {0.0, 0.0, 0.0};
    spec.female_log_effect = 0.0;
    const auto pop = generate_synthetic(spec, 100000, 9);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &p : pop.persons())
        if (p.in_work()) {
            sum += p.gross_earnings;
            ++n;
        }
    ASSERT_GT(n, 1000u);
    const double analytic = std::exp(spec.earnings_mu + spec.earnings_sigma * spec.earnings_sigma / 2.0);
    EXPECT_NEAR(sum / static_cast<double>(n), analytic, 0.05 * analytic);
}

TEST(Synthetic, InvalidSpecRejected) {
    SyntheticSpec spec;
    spec.earnings_sigma = -0.5;
    EXPECT_THROW(generate_synthetic(spec, 10, 1), ConfigError);
    EXPECT_THROW(generate_synthetic(SyntheticSpec{}, 0, 1), ConfigError);
}

namespace {

std::string totals_text(double first_share) {
    std::ostringstream s;
    s << "[meta]\nkey,value\nperiod,2020-05\nreference_population,1000\nin_work_total,400\nunemployed_total,50\n"
      << "[in_work_by_age_gender]\nage_band,gender,share\n25-34,male," << first_share << "\n25-34,female,0.5\n"
      << "[employment_by_industry_occupation_gender]\nindustry,occupation,gender,share\n0,0,male,0.5\n1,1,female,0.5\n"
      << "[unemployment_by_gender]\ngender,share\nmale,0.6\nfemale,0.4\n";
    return s.str();
}

} // namespace

TEST(ControlTotals, PeriodPreservedAndSharesNormalised) {
    const auto ct = parse_control_totals(totals_text(0.5000003));
    EXPECT_EQ(ct.period, "2020-05");
    double total = 0.0;
    for (const auto &band : ct.in_work_share) total += band[0] + band[1];
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(ct.scale(100), 0.1);
}

TEST(ControlTotals, SharesOutsideToleranceRejected) {
    EXPECT_THROW(parse_control_totals(totals_text(0.3)), ValidationError);
}

TEST(ControlTotals, MissingSectionIsSchemaError) {
    EXPECT_THROW(parse_control_totals("[meta]\nkey,value\nperiod,x\n"), SchemaError);
}

TEST(ControlTotals, FormatRoundTrip) {
    const auto ct = parse_control_totals(totals_text(0.5));
    const auto again = parse_control_totals(format_control_totals(ct));
    EXPECT_EQ(again.period, ct.period);
    EXPECT_EQ(again.in_work_share, ct.in_work_share);
    EXPECT_EQ(again.employment_share, ct.employment_share);
    EXPECT_EQ(format_control_totals(again), format_control_totals(ct));
}

TEST(ControlTotals, ShippedWaveFilesLoad) {
    for (const char *name : {"may2020", "nov2020", "jan2021"}) {
        const auto ct = load_control_totals(std::filesystem::path(WSIM_TEST_DATA_DIR) / "waves" / (std::string(name) + ".csv"));
        EXPECT_GT(ct.in_work_total, 0.0);
        EXPECT_TRUE(ct.has_holding_rates);
    }
}
