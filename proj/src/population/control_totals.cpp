#include "wsim/population/control_totals.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"

#include <cmath>
#include <sstream>

namespace wsim {

namespace {

constexpr double kShareTolerance = 1e-6;

const csv::Table &require(const std::map<std::string, csv::Table> &sections, const std::string &name) {
    auto it = sections.find(name);
    if (it == sections.end()) throw SchemaError("control totals: missing section [" + name + "]");
    return it->second;
}

std::size_t require_column(const csv::Table &t, const std::string &section, const std::string &col) {
    auto idx = t.column(col);
    if (!idx) throw SchemaError("control totals: section [" + section + "] lacks column '" + col + "'");
    return *idx;
}

template <class Container>
void normalise(Container &values, const std::string &section) {
    double total = 0.0;
    for (auto &v : values) total += v;
    if (std::abs(total - 1.0) > kShareTolerance) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "control totals: shares in [" << section << "] sum to " << total << ", expected 1";
        throw ValidationError(msg.str());
    }
    for (auto &v : values) v /= total;
}

double share_value(const std::string &text, const std::string &section, std::size_t row) {
    const double v = csv::parse_double(text, section);
    if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("control totals: share outside [0, 1] in [" + section + "]", row);
    return v;
}

double count_value(const std::string &text, const std::string &section, std::size_t row) {
    const double v = csv::parse_double(text, section);
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError("control totals: negative count in [" + section + "]", row);
    return v;
}

} // namespace

std::map<int, double> ControlTotals::industry_share(Gender g) const {
    std::map<int, double> out;
    double total = 0.0;
    for (const auto &[key, s] : employment_share)
        if (key[2] == static_cast<int>(g)) {
            out[key[0]] += s;
            total += s;
        }
    if (total > 0.0)
        for (auto &[k, v] : out) v /= total;
    return out;
}

std::map<int, double> ControlTotals::occupation_share(Gender g) const {
    std::map<int, double> out;
    double total = 0.0;
    for (const auto &[key, s] : employment_share)
        if (key[2] == static_cast<int>(g)) {
            out[key[1]] += s;
            total += s;
        }
    if (total > 0.0)
        for (auto &[k, v] : out) v /= total;
    return out;
}

ControlTotals parse_control_totals(std::string_view text) {
    const auto sections = csv::parse_sections(text);
    ControlTotals ct;

    {
        const auto &t = require(sections, "meta");
        const auto kc = require_column(t, "meta", "key");
        const auto vc = require_column(t, "meta", "value");
        std::map<std::string, std::string> kv;
        for (const auto &r : t.rows) kv[r.at(kc)] = r.at(vc);
        auto need = [&](const std::string &k) -> const std::string & {
            auto it = kv.find(k);
            if (it == kv.end()) throw SchemaError("control totals: [meta] lacks '" + k + "'");
            return it->second;
        };
        ct.period = need("period");
        ct.reference_population = count_value(need("reference_population"), "meta", 0);
        ct.in_work_total = count_value(need("in_work_total"), "meta", 0);
        ct.unemployed_total = count_value(need("unemployed_total"), "meta", 0);
        if (!(ct.reference_population > 0.0)) throw ValidationError("control totals: reference_population must be > 0");
        if (ct.in_work_total + ct.unemployed_total > ct.reference_population)
            throw ValidationError("control totals: in-work plus unemployed exceeds reference population");
        if (auto it = kv.find("capital_index_change"); it != kv.end())
            ct.capital_index_change = csv::parse_double(it->second, "capital_index_change");
        if (auto it = kv.find("mean_earnings_target"); it != kv.end() && !it->second.empty()) {
            ct.mean_earnings_target = count_value(it->second, "meta", 0);
        }
    }

    {
        const std::string name = "in_work_by_age_gender";
        const auto &t = require(sections, name);
        const auto ac = require_column(t, name, "age_band");
        const auto gc = require_column(t, name, "gender");
        const auto sc = require_column(t, name, "share");
        std::vector<double> flat(kAgeBandCount * 2, 0.0);
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto &row = t.rows[r];
            const int band = parse_age_band(row.at(ac));
            const auto g = static_cast<std::size_t>(parse_gender(row.at(gc)));
            flat[static_cast<std::size_t>(band) * 2 + g] += share_value(row.at(sc), name, r + 1);
        }
        normalise(flat, name);
        for (int b = 0; b < kAgeBandCount; ++b)
            for (std::size_t g = 0; g < 2; ++g)
                ct.in_work_share[static_cast<std::size_t>(b)][g] = flat[static_cast<std::size_t>(b) * 2 + g];
    }

    {
        const std::string name = "employment_by_industry_occupation_gender";
        const auto &t = require(sections, name);
        const auto ic = require_column(t, name, "industry");
        const auto oc = require_column(t, name, "occupation");
        const auto gc = require_column(t, name, "gender");
        const auto sc = require_column(t, name, "share");
        std::vector<std::array<int, 3>> keys;
        std::vector<double> shares;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto &row = t.rows[r];
            keys.push_back({static_cast<int>(csv::parse_int(row.at(ic), "industry")),
                            static_cast<int>(csv::parse_int(row.at(oc), "occupation")),
                            static_cast<int>(parse_gender(row.at(gc)))});
            if (keys.back()[0] < 0 || keys.back()[1] < 0)
                throw ValidationError("control totals: negative industry/occupation code", r + 1);
            shares.push_back(share_value(row.at(sc), name, r + 1));
        }
        normalise(shares, name);
        for (std::size_t i = 0; i < keys.size(); ++i) ct.employment_share[keys[i]] += shares[i];
    }

    {
        const std::string name = "unemployment_by_gender";
        const auto &t = require(sections, name);
        const auto gc = require_column(t, name, "gender");
        const auto sc = require_column(t, name, "share");
        std::vector<double> s(2, 0.0);
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            s[static_cast<std::size_t>(parse_gender(t.rows[r].at(gc)))] += share_value(t.rows[r].at(sc), name, r + 1);
        normalise(s, name);
        ct.unemployment_share = {s[0], s[1]};
    }

    auto takeup = [&](const std::string &name, std::map<int, double> &out) {
        auto it = sections.find(name);
        if (it == sections.end()) return;
        const auto &t = it->second;
        const auto ic = require_column(t, name, "industry");
        const auto cc = require_column(t, name, "count");
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            out[static_cast<int>(csv::parse_int(t.rows[r].at(ic), "industry"))] +=
                count_value(t.rows[r].at(cc), name, r + 1);
    };
    takeup("cws_takeup_by_industry", ct.cws_takeup);
    takeup("pup_takeup_by_industry", ct.pup_takeup);

    if (auto it = sections.find("earnings_index"); it != sections.end()) {
        const std::string name = "earnings_index";
        const auto &t = it->second;
        const auto ic = require_column(t, name, "industry");
        const auto oc = require_column(t, name, "occupation");
        const auto fc = require_column(t, name, "factor");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const double f = count_value(t.rows[r].at(fc), name, r + 1);
            ct.earnings_index[{static_cast<int>(csv::parse_int(t.rows[r].at(ic), "industry")),
                               static_cast<int>(csv::parse_int(t.rows[r].at(oc), "occupation"))}] = f;
        }
    }

    const auto by_age = sections.find("holding_rate_by_age");
    const auto by_q = sections.find("holding_rate_by_income_quintile");
    if ((by_age == sections.end()) != (by_q == sections.end()))
        throw SchemaError("control totals: holding rates need both age and income-quintile sections");
    if (by_age != sections.end()) {
        ct.has_holding_rates = true;
        const auto &ta = by_age->second;
        const auto ac = require_column(ta, by_age->first, "age_band");
        const auto rc = require_column(ta, by_age->first, "rate");
        for (std::size_t r = 0; r < ta.rows.size(); ++r)
            ct.holding_rate_by_age[static_cast<std::size_t>(parse_age_band(ta.rows[r].at(ac)))] =
                share_value(ta.rows[r].at(rc), by_age->first, r + 1);
        const auto &tq = by_q->second;
        const auto qc = require_column(tq, by_q->first, "quintile");
        const auto qr = require_column(tq, by_q->first, "rate");
        for (std::size_t r = 0; r < tq.rows.size(); ++r) {
            const auto q = csv::parse_int(tq.rows[r].at(qc), "quintile");
            if (q < 1 || q > kIncomeQuintiles) throw ValidationError("control totals: quintile must be 1..5", r + 1);
            ct.holding_rate_by_quintile[static_cast<std::size_t>(q - 1)] = share_value(tq.rows[r].at(qr), by_q->first, r + 1);
        }
    }
    return ct;
}

ControlTotals load_control_totals(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) throw SchemaError("control totals file not found: " + path.string());
    return parse_control_totals(csv::read_file(path));
}

std::string format_control_totals(const ControlTotals &ct) {
    std::ostringstream out;
    auto f = [](double v) { return csv::format_double(v); };
    out << "[meta]\nkey,value\n";
    csv::write_row(out, {"period", ct.period});
    csv::write_row(out, {"reference_population", f(ct.reference_population)});
    csv::write_row(out, {"in_work_total", f(ct.in_work_total)});
    csv::write_row(out, {"unemployed_total", f(ct.unemployed_total)});
    csv::write_row(out, {"capital_index_change", f(ct.capital_index_change)});
    if (ct.mean_earnings_target) csv::write_row(out, {"mean_earnings_target", f(*ct.mean_earnings_target)});
    out << "\n[in_work_by_age_gender]\nage_band,gender,share\n";
    for (int b = 0; b < kAgeBandCount; ++b)
        for (int g = 0; g < 2; ++g)
            csv::write_row(out, {std::string(age_band_label(b)), std::string(to_string(static_cast<Gender>(g))),
                                 f(ct.in_work_share[static_cast<std::size_t>(b)][static_cast<std::size_t>(g)])});
    out << "\n[employment_by_industry_occupation_gender]\nindustry,occupation,gender,share\n";
    for (const auto &[k, s] : ct.employment_share)
        csv::write_row(out, {std::to_string(k[0]), std::to_string(k[1]),
                             std::string(to_string(static_cast<Gender>(k[2]))), f(s)});
    out << "\n[unemployment_by_gender]\ngender,share\n";
    csv::write_row(out, {"male", f(ct.unemployment_share[0])});
    csv::write_row(out, {"female", f(ct.unemployment_share[1])});
    if (!ct.cws_takeup.empty()) {
        out << "\n[cws_takeup_by_industry]\nindustry,count\n";
        for (const auto &[i, c] : ct.cws_takeup) csv::write_row(out, {std::to_string(i), f(c)});
    }
    if (!ct.pup_takeup.empty()) {
        out << "\n[pup_takeup_by_industry]\nindustry,count\n";
        for (const auto &[i, c] : ct.pup_takeup) csv::write_row(out, {std::to_string(i), f(c)});
    }
    if (!ct.earnings_index.empty()) {
        out << "\n[earnings_index]\nindustry,occupation,factor\n";
        for (const auto &[k, v] : ct.earnings_index)
            csv::write_row(out, {std::to_string(k.first), std::to_string(k.second), f(v)});
    }
    if (ct.has_holding_rates) {
        out << "\n[holding_rate_by_age]\nage_band,rate\n";
        for (int b = 0; b < kAgeBandCount; ++b)
            csv::write_row(out, {std::string(age_band_label(b)), f(ct.holding_rate_by_age[static_cast<std::size_t>(b)])});
        out << "\n[holding_rate_by_income_quintile]\nquintile,rate\n";
        for (int q = 0; q < kIncomeQuintiles; ++q)
            csv::write_row(out, {std::to_string(q + 1), f(ct.holding_rate_by_quintile[static_cast<std::size_t>(q)])});
    }
    return out.str();
}

} // namespace wsim
