#include "wsim/scenario/compare.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"
#include "wsim/indicators/indicator_table.hpp"
#include "wsim/scenario/pipeline.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <sstream>

namespace wsim {

namespace fs = std::filesystem;

namespace {

nlohmann::json read_manifest(const fs::path &dir) {
    const auto p = dir / kManifestName;
    if (!fs::exists(p)) throw ValidationError("no manifest in " + dir.string());
    return nlohmann::json::parse(csv::read_file(p));
}

bool is_rs(const std::string &indicator, const std::string &group) {
    return indicator.rfind("table4:", 0) == 0 && group == "row_5";
}

bool is_band_share(const std::string &indicator, const std::string &group) {
    return indicator.rfind("rr_rel:", 0) == 0 && group != "recipients" && group != "excluded_nonpositive_income";
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

CompareReport compare_runs(const fs::path &a, const fs::path &b) {
    const auto ma = read_manifest(a), mb = read_manifest(b);
    if (ma.at("base_population_fingerprint") != mb.at("base_population_fingerprint"))
        throw ValidationError("bundles were built on different base populations");
    if (ma.at("seed") != mb.at("seed")) throw ValidationError("bundles were built with different seeds");

    const auto ta = ind::IndicatorTable::parse_csv(csv::read_file(a / kIndicatorsName));
    const auto tb = ind::IndicatorTable::parse_csv(csv::read_file(b / kIndicatorsName));
    std::map<std::pair<std::string, std::string>, double> bv;
    for (const auto &r : tb.rows()) bv.emplace(std::make_pair(r.indicator, r.group), r.value);

    CompareReport rep;
    std::map<std::pair<std::string, std::string>, bool> seen;
    for (const auto &r : ta.rows()) {
        IndicatorDelta d{r.indicator, r.group, r.value, std::nan(""), std::nan(""), {}};
        const auto key = std::make_pair(r.indicator, r.group);
        seen[key] = true;
        if (const auto it = bv.find(key); it != bv.end()) {
            d.b = it->second;
            d.delta = d.b - d.a;
        } else {
            d.flag = "missing_in_b";
        }
        if (d.flag.empty() && !std::isnan(d.delta)) {
            if (is_rs(d.indicator, d.group) && sign(d.a) != sign(d.b)) d.flag = "sign_change";
            else if (is_band_share(d.indicator, d.group) && d.delta != 0.0) d.flag = d.delta > 0.0 ? "up" : "down";
        }
        rep.rows.push_back(std::move(d));
    }
    for (const auto &r : tb.rows())
        if (!seen.count({r.indicator, r.group}))
            rep.rows.push_back({r.indicator, r.group, std::nan(""), r.value, std::nan(""), "missing_in_a"});
    for (const auto &r : rep.rows) rep.flagged += !r.flag.empty();
    return rep;
}

std::string CompareReport::to_csv() const {
    std::ostringstream out;
    csv::write_row(out, {"indicator", "group", "a", "b", "delta", "flag"});
    const auto f = [](double v) { return std::isnan(v) ? std::string{} : csv::format_double(v); };
    for (const auto &r : rows) csv::write_row(out, {r.indicator, r.group, f(r.a), f(r.b), f(r.delta), r.flag});
    return out.str();
}

} // namespace wsim
