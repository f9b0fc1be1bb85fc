#include "wsim/policy/schedule_io.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"

#include <algorithm>
#include <cstdlib>

namespace wsim::policy {

namespace {

using nlohmann::json;

Cents euros(const json &j, const char *what) {
    if (!j.is_number()) throw ConfigError(std::string("schedule: '") + what + "' must be a number");
    return Cents::from_euros(j.get<double>());
}

json euros_json(Cents c) { return c.euros(); }

PaymentRule rule_from_json(const json &j) {
    PaymentRule r;
    const auto type = j.at("type").get<std::string>();
    if (type == "flat") {
        r.kind = PaymentRule::Kind::flat;
        r.amount = euros(j.at("amount"), "amount");
    } else if (type == "proportional") {
        r.kind = PaymentRule::Kind::proportional;
        r.rate = j.at("rate").get<double>();
        if (j.contains("cap") && !j["cap"].is_null()) r.cap = euros(j["cap"], "cap");
    } else if (type == "tapered") {
        r.kind = PaymentRule::Kind::tapered;
        for (const auto &s : j.at("steps"))
            r.steps.push_back({s.at("below_share").get<double>(), euros(s.at("amount"), "amount")});
    } else {
        throw ConfigError("schedule: unknown rule type '" + type + "'");
    }
    return r;
}

json rule_to_json(const PaymentRule &r) {
    switch (r.kind) {
    case PaymentRule::Kind::flat:
        return {{"type", "flat"}, {"amount", euros_json(r.amount)}};
    case PaymentRule::Kind::proportional: {
        json j{{"type", "proportional"}, {"rate", r.rate}};
        j["cap"] = r.cap ? json(euros_json(*r.cap)) : json(nullptr);
        return j;
    }
    case PaymentRule::Kind::tapered: {
        json steps = json::array();
        for (const auto &s : r.steps) steps.push_back({{"below_share", s.below_share}, {"amount", euros_json(s.amount)}});
        return {{"type", "tapered"}, {"steps", steps}};
    }
    }
    return {};
}

} // namespace

PaymentSchedule schedule_from_json(const json &j) {
    try {
        PaymentSchedule s;
        s.id = j.at("id").get<std::string>();
        s.label = j.value("label", s.id);
        const auto scheme = j.at("scheme").get<std::string>();
        if (scheme == "cws")
            s.scheme = Scheme::cws;
        else if (scheme == "pup")
            s.scheme = Scheme::pup;
        else
            throw ConfigError("schedule '" + s.id + "': unknown scheme '" + scheme + "'");
        const auto basis = j.value("basis", std::string("gross_pay"));
        if (basis == "apnp")
            s.basis = Basis::apnp;
        else if (basis == "gross_pay")
            s.basis = Basis::gross_pay;
        else
            throw ConfigError("schedule '" + s.id + "': unknown basis '" + basis + "'");
        s.effective_date = j.value("effective_date", std::string());
        s.taxable = j.value("taxable", false);
        for (const auto &b : j.at("bands")) {
            PaymentBand band;
            band.lower = euros(b.at("lower"), "lower");
            if (b.contains("upper") && !b["upper"].is_null()) band.upper = euros(b["upper"], "upper");
            band.rule = rule_from_json(b.at("rule"));
            s.bands.push_back(std::move(band));
        }
        s.validate();
        return s;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("schedule: ") + e.what());
    }
}

json to_json(const PaymentSchedule &s) {
    json bands = json::array();
    for (const auto &b : s.bands) {
        json jb{{"lower", euros_json(b.lower)}};
        jb["upper"] = b.upper == kUnbounded ? json(nullptr) : json(euros_json(b.upper));
        jb["rule"] = rule_to_json(b.rule);
        bands.push_back(jb);
    }
    return {{"id", s.id},
            {"label", s.label},
            {"scheme", to_string(s.scheme)},
            {"basis", to_string(s.basis)},
            {"effective_date", s.effective_date},
            {"taxable", s.taxable},
            {"bands", bands}};
}

PaymentSchedule load_schedule(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) throw ConfigError("schedule file not found: " + path.string());
    try {
        return schedule_from_json(json::parse(csv::read_file(path)));
    } catch (const json::parse_error &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

PresetRegistry::PresetRegistry(const std::filesystem::path &dir) {
    if (!std::filesystem::is_directory(dir)) throw ConfigError("preset directory not found: " + dir.string());
    for (const char *sub : {"cws", "pup"}) {
        const auto d = dir / sub;
        if (!std::filesystem::is_directory(d)) continue;
        std::vector<std::filesystem::path> files;
        for (const auto &e : std::filesystem::directory_iterator(d))
            if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto &f : files) add(load_schedule(f));
    }
    const auto designs = dir / "designs.json";
    if (std::filesystem::exists(designs)) {
        try {
            const auto j = json::parse(csv::read_file(designs));
            for (const auto &d : j.at("designs"))
                add_design({d.at("id").get<std::string>(), d.value("label", d.at("id").get<std::string>()),
                            d.at("cws").get<std::string>(), d.at("pup").get<std::string>()});
        } catch (const json::exception &e) {
            throw ConfigError(designs.string() + ": " + e.what());
        }
    }
}

void PresetRegistry::add(PaymentSchedule schedule) {
    schedule.validate();
    auto &map = schedule.scheme == Scheme::cws ? cws_ : pup_;
    const auto id = schedule.id;
    if (!map.emplace(id, std::move(schedule)).second) throw ConfigError("duplicate schedule id '" + id + "'");
}

void PresetRegistry::add_design(DesignPair pair) {
    if (!has_cws(pair.cws)) throw ConfigError("design '" + pair.id + "' references unknown CWS schedule '" + pair.cws + "'");
    if (!has_pup(pair.pup)) throw ConfigError("design '" + pair.id + "' references unknown PUP schedule '" + pair.pup + "'");
    if (has_design(pair.id)) throw ConfigError("duplicate design id '" + pair.id + "'");
    designs_.push_back(std::move(pair));
}

bool PresetRegistry::has_design(const std::string &id) const {
    return std::any_of(designs_.begin(), designs_.end(), [&](const DesignPair &d) { return d.id == id; });
}

const PaymentSchedule &PresetRegistry::cws(const std::string &id) const {
    auto it = cws_.find(id);
    if (it == cws_.end()) throw ConfigError("unknown CWS design '" + id + "'");
    return it->second;
}

const PaymentSchedule &PresetRegistry::pup(const std::string &id) const {
    auto it = pup_.find(id);
    if (it == pup_.end()) throw ConfigError("unknown PUP design '" + id + "'");
    return it->second;
}

const DesignPair &PresetRegistry::design(const std::string &id) const {
    for (const auto &d : designs_)
        if (d.id == id) return d;
    throw ConfigError("unknown design '" + id + "'");
}

std::vector<std::string> PresetRegistry::cws_ids() const {
    std::vector<std::string> out;
    for (const auto &[k, v] : cws_) out.push_back(k);
    return out;
}

std::vector<std::string> PresetRegistry::pup_ids() const {
    std::vector<std::string> out;
    for (const auto &[k, v] : pup_) out.push_back(k);
    return out;
}

std::filesystem::path default_data_dir() {
    if (const char *env = std::getenv("WSIM_DATA_DIR"); env && *env) return env;
    return WSIM_DATA_DIR;
}

std::filesystem::path default_preset_dir() {
    if (const char *env = std::getenv("WSIM_PRESET_DIR"); env && *env) return env;
    return default_data_dir() / "presets";
}

} // namespace wsim::policy
