#include "wsim/scenario/config.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"
#include "wsim/policy/schedule_io.hpp"

#include <cctype>
#include <cmath>
#include <utility>

namespace wsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::pair<const char *, double SyntheticSpec::*> kSpecScalars[] = {
    {"couple_prob", &SyntheticSpec::couple_prob},
    {"extra_child_prob", &SyntheticSpec::extra_child_prob},
    {"elderly_employment_rate", &SyntheticSpec::elderly_employment_rate},
    {"unemployed_share", &SyntheticSpec::unemployed_share},
    {"employee_share", &SyntheticSpec::employee_share},
    {"public_share", &SyntheticSpec::public_share},
    {"temporary_share", &SyntheticSpec::temporary_share},
    {"earnings_mu", &SyntheticSpec::earnings_mu},
    {"earnings_sigma", &SyntheticSpec::earnings_sigma},
    {"female_log_effect", &SyntheticSpec::female_log_effect},
    {"net_ratio", &SyntheticSpec::net_ratio},
    {"capital_prob", &SyntheticSpec::capital_prob},
    {"capital_mu", &SyntheticSpec::capital_mu},
    {"capital_sigma", &SyntheticSpec::capital_sigma},
    {"capital_yield", &SyntheticSpec::capital_yield},
    {"private_pension_prob", &SyntheticSpec::private_pension_prob},
    {"private_pension_mu", &SyntheticSpec::private_pension_mu},
    {"private_pension_sigma", &SyntheticSpec::private_pension_sigma},
    {"state_pension_prob", &SyntheticSpec::state_pension_prob},
    {"state_pension_amount", &SyntheticSpec::state_pension_amount},
    {"other_income_prob", &SyntheticSpec::other_income_prob},
    {"other_income_mu", &SyntheticSpec::other_income_mu},
    {"other_income_sigma", &SyntheticSpec::other_income_sigma},
    {"housing_zero_prob", &SyntheticSpec::housing_zero_prob},
    {"housing_mu", &SyntheticSpec::housing_mu},
    {"housing_sigma", &SyntheticSpec::housing_sigma},
    {"childcare_prob", &SyntheticSpec::childcare_prob},
};

fs::path resolve(const std::string &raw, const fs::path &base_dir) {
    fs::path p(raw);
    if (p.is_absolute()) return p.lexically_normal();
    const auto local = fs::absolute(base_dir / p).lexically_normal();
    if (fs::exists(local)) return local;
    const auto shipped = fs::absolute(policy::default_data_dir() / p).lexically_normal();
    if (fs::exists(shipped)) return shipped;
    return local;
}

std::string wave_id(std::string label) {
    std::string out;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "wave" : out;
}

const policy::PresetRegistry &registry_for(const json &j, const fs::path &base_dir, policy::PresetRegistry &storage,
                                           bool &loaded) {
    if (!loaded) {
        storage = policy::PresetRegistry(j.contains("presets") ? resolve(j["presets"].get<std::string>(), base_dir)
                                                               : policy::default_preset_dir());
        loaded = true;
    }
    return storage;
}

policy::PaymentSchedule schedule_ref(const json &v, bool cws, const policy::PresetRegistry &reg) {
    if (v.is_object()) return policy::schedule_from_json(v);
    const auto id = v.get<std::string>();
    if (cws) {
        if (!reg.has_cws(id)) throw ConfigError("unknown CWS schedule '" + id + "'");
        return reg.cws(id);
    }
    if (!reg.has_pup(id)) throw ConfigError("unknown PUP schedule '" + id + "'");
    return reg.pup(id);
}

SyntheticSpec spec_from_json(const json &j) {
    SyntheticSpec s;
    for (const auto &[key, value] : j.items()) {
        bool known = false;
        for (const auto &[name, member] : kSpecScalars)
            if (key == name) {
                s.*member = value.get<double>();
                known = true;
            }
        if (key == "employment_rate") {
            s.employment_rate = value.get<std::array<double, 2>>();
            known = true;
        } else if (key == "retirement_age") {
            s.retirement_age = value.get<int>();
            known = true;
        }
        if (!known) throw ConfigError("unknown synthetic population parameter '" + key + "'");
    }
    s.validate();
    return s;
}

json spec_to_json(const SyntheticSpec &s) {
    json j = json::object();
    for (const auto &[name, member] : kSpecScalars) j[name] = s.*member;
    j["employment_rate"] = s.employment_rate;
    j["retirement_age"] = s.retirement_age;
    return j;
}

ScenarioConfig parse_impl(const json &j, const fs::path &base_dir) {
    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    ScenarioConfig c;
    policy::PresetRegistry storage;
    bool loaded = false;
    auto registry = [&]() -> const policy::PresetRegistry & { return registry_for(j, base_dir, storage, loaded); };

    c.name = j.value("name", c.name);
    c.seed = j.value("seed", c.seed);

    const auto &pop = j.at("population");
    if (pop.contains("file")) {
        c.population.file = resolve(pop["file"].get<std::string>(), base_dir);
    } else if (pop.contains("synthetic")) {
        const auto &s = pop["synthetic"];
        c.population.persons = s.at("persons").get<std::size_t>();
        c.population.seed = s.value("seed", c.seed);
        if (s.contains("spec")) c.population.spec = spec_from_json(s["spec"]);
    } else {
        throw ConfigError("population needs 'file' or 'synthetic'");
    }

    if (j.contains("waves")) {
        for (const auto &w : j["waves"]) {
            WaveConfig wc;
            wc.label = w.value("label", std::string{});
            wc.control_totals = resolve(w.at("control_totals").get<std::string>(), base_dir);
            wc.id = w.value("id", wave_id(wc.label.empty() ? wc.control_totals.stem().string() : wc.label));
            if (wc.label.empty()) wc.label = wc.id;
            c.waves.push_back(std::move(wc));
        }
    } else if (j.contains("control_totals")) {
        WaveConfig wc;
        wc.control_totals = resolve(j["control_totals"].get<std::string>(), base_dir);
        wc.label = j.value("wave", wc.control_totals.stem().string());
        wc.id = wave_id(wc.label);
        c.waves.push_back(std::move(wc));
    } else {
        throw ConfigError("config needs 'waves' or 'control_totals'");
    }

    auto add_design = [&](const json &d) {
        DesignConfig dc;
        if (d.is_string()) {
            const auto id = d.get<std::string>();
            if (!registry().has_design(id)) throw ConfigError("unknown design '" + id + "'");
            const auto &pair = registry().design(id);
            dc.id = pair.id;
            dc.label = pair.label;
            dc.cws = registry().cws(pair.cws);
            dc.pup = registry().pup(pair.pup);
        } else {
            dc.cws = schedule_ref(d.at("cws"), true, d.at("cws").is_object() ? policy::PresetRegistry{} : registry());
            dc.pup = schedule_ref(d.at("pup"), false, d.at("pup").is_object() ? policy::PresetRegistry{} : registry());
            dc.id = d.value("id", dc.cws.id + "+" + dc.pup.id);
            dc.label = d.value("label", dc.id);
        }
        c.designs.push_back(std::move(dc));
    };
    if (j.contains("designs")) {
        for (const auto &d : j["designs"]) add_design(d);
    } else if (j.contains("cws") && j.contains("pup")) {
        add_design(json{{"cws", j["cws"]}, {"pup", j["pup"]}});
    } else {
        throw ConfigError("config needs 'designs' or a 'cws'/'pup' pair");
    }

    if (j.contains("tax_benefit")) {
        const auto &t = j["tax_benefit"];
        c.tax = t.is_object() ? policy::tax_benefit_from_json(t)
                              : policy::load_tax_benefit(resolve(t.get<std::string>(), base_dir));
    } else {
        c.tax = policy::load_tax_benefit(policy::default_data_dir() / "tax_benefit_default.json");
    }
    if (j.contains("childcare_margins") && !j["childcare_margins"].is_null())
        c.childcare_margins = resolve(j["childcare_margins"].get<std::string>(), base_dir);

    c.employer_topup_share = j.value("employer_topup_share", c.employer_topup_share);
    c.cws_earnings_ceiling = j.value("cws_earnings_ceiling", c.cws_earnings_ceiling);
    c.capital_yield = j.value("capital_yield", c.capital_yield);
    c.pup_band_shift = j.value("pup_band_shift", c.pup_band_shift);
    c.estimation_sample_cap = j.value("estimation_sample_cap", c.estimation_sample_cap);
    if (j.contains("kakwani_convention"))
        c.kakwani = ind::parse_kakwani_convention(j["kakwani_convention"].get<std::string>());
    if (j.contains("microdata")) {
        const auto m = j["microdata"].get<std::string>();
        if (m == "none") c.microdata = MicrodataScope::none;
        else if (m == "recipients") c.microdata = MicrodataScope::recipients;
        else if (m == "all") c.microdata = MicrodataScope::all;
        else throw ConfigError("microdata must be none, recipients or all");
    }
    if (j.contains("curves")) {
        const auto &g = j["curves"];
        c.curves.from = g.value("from", c.curves.from);
        c.curves.to = g.value("to", c.curves.to);
        c.curves.step = g.value("step", c.curves.step);
        c.curves.children = g.value("children", c.curves.children);
    }
    if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>(), base_dir);
    return c;
}

} // namespace

void ScenarioConfig::validate() const {
    if (population.file) {
        if (!fs::exists(*population.file)) throw ConfigError("population file not found: " + population.file->string());
    } else {
        if (population.persons == 0) throw ConfigError("synthetic population needs at least one person");
        population.spec.validate();
    }
    if (waves.empty()) throw ConfigError("at least one wave is required");
    for (const auto &w : waves)
        if (!fs::exists(w.control_totals)) throw ConfigError("control totals not found: " + w.control_totals.string());
    for (std::size_t a = 0; a < waves.size(); ++a)
        for (std::size_t b = a + 1; b < waves.size(); ++b)
            if (waves[a].id == waves[b].id) throw ConfigError("duplicate wave id '" + waves[a].id + "'");
    if (designs.empty()) throw ConfigError("at least one design is required");
    for (std::size_t a = 0; a < designs.size(); ++a) {
        designs[a].cws.validate();
        designs[a].pup.validate();
        for (std::size_t b = a + 1; b < designs.size(); ++b)
            if (designs[a].id == designs[b].id) throw ConfigError("duplicate design id '" + designs[a].id + "'");
    }
    tax.validate();
    if (childcare_margins && !fs::exists(*childcare_margins))
        throw ConfigError("childcare margins not found: " + childcare_margins->string());
    if (!(employer_topup_share >= 0.0 && employer_topup_share <= 1.0))
        throw ConfigError("employer_topup_share must lie in [0, 1]");
    if (!(cws_earnings_ceiling > 0.0)) throw ConfigError("cws_earnings_ceiling must be positive");
    if (!(capital_yield > 0.0)) throw ConfigError("capital_yield must be positive");
    if (!std::isfinite(pup_band_shift)) throw ConfigError("pup_band_shift must be finite");
    if (!(curves.step > 0.0) || curves.to < curves.from || curves.from < 0.0 || curves.children < 0)
        throw ConfigError("curves grid needs 0 <= from <= to, a positive step and children >= 0");
}

ScenarioConfig parse_config(const json &j, const fs::path &base_dir) {
    try {
        return parse_impl(j, base_dir);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    }
}

ScenarioConfig load_config(const fs::path &path) {
    if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
    json j;
    try {
        j = json::parse(csv::read_file(path));
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("config_hash")) j = j["config"];
    return parse_config(j, path.parent_path().empty() ? fs::current_path() : path.parent_path());
}

std::string_view to_string(MicrodataScope s) {
    switch (s) {
    case MicrodataScope::none: return "none";
    case MicrodataScope::recipients: return "recipients";
    case MicrodataScope::all: return "all";
    }
    return "recipients";
}

json to_json(const ScenarioConfig &c) {
    json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    if (c.population.file) {
        j["population"] = {{"file", c.population.file->string()}};
    } else {
        j["population"] = {{"synthetic",
                            {{"persons", c.population.persons},
                             {"seed", c.population.seed},
                             {"spec", spec_to_json(c.population.spec)}}}};
    }
    j["waves"] = json::array();
    for (const auto &w : c.waves)
        j["waves"].push_back({{"id", w.id}, {"label", w.label}, {"control_totals", w.control_totals.string()}});
    j["designs"] = json::array();
    for (const auto &d : c.designs)
        j["designs"].push_back({{"id", d.id}, {"label", d.label}, {"cws", policy::to_json(d.cws)}, {"pup", policy::to_json(d.pup)}});
    j["tax_benefit"] = policy::to_json(c.tax);
    j["childcare_margins"] = c.childcare_margins ? json(c.childcare_margins->string()) : json(nullptr);
    j["employer_topup_share"] = c.employer_topup_share;
    j["cws_earnings_ceiling"] = c.cws_earnings_ceiling;
    j["capital_yield"] = c.capital_yield;
    j["pup_band_shift"] = c.pup_band_shift;
    j["estimation_sample_cap"] = c.estimation_sample_cap;
    j["kakwani_convention"] = std::string(ind::to_string(c.kakwani));
    j["microdata"] = std::string(to_string(c.microdata));
    j["curves"] = {{"from", c.curves.from}, {"to", c.curves.to}, {"step", c.curves.step}, {"children", c.curves.children}};
    return j;
}

} // namespace wsim
