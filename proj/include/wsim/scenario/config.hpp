#pragma once

#include "wsim/indicators/inequality.hpp"
#include "wsim/policy/schedule.hpp"
#include "wsim/policy/tax_benefit.hpp"
#include "wsim/population/synthetic.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wsim {

struct PopulationSource {
    std::optional<std::filesystem::path> file; ///< person-level CSV
    SyntheticSpec spec;                         ///< used when no file is given
    std::size_t persons = 0;
    std::uint64_t seed = 0;
};

struct WaveConfig {
    std::string id;    ///< file-name safe
    std::string label; ///< e.g. "May 2020"
    std::filesystem::path control_totals;
};

struct DesignConfig {
    std::string id;
    std::string label;
    policy::WageSubsidySchedule cws;
    policy::PupSchedule pup;
};

struct CurveGrid {
    double from = 0.0;
    double to = 1600.0;
    double step = 1.0;
    int children = 0;
};

enum class MicrodataScope { none, recipients, all };

struct ScenarioConfig {
    std::string name = "scenario";
    PopulationSource population;
    std::vector<WaveConfig> waves;
    std::vector<DesignConfig> designs;
    policy::TaxBenefitParams tax;
    std::optional<std::filesystem::path> childcare_margins;
    double employer_topup_share = 0.6;
    double cws_earnings_ceiling = 1462.0;
    double capital_yield = 0.04;
    double pup_band_shift = 0.0; ///< euros added to every PUP band payment
    std::uint64_t seed = 1;
    std::size_t estimation_sample_cap = 40000;
    ind::KakwaniConvention kakwani = ind::KakwaniConvention::concentration_minus_gini;
    MicrodataScope microdata = MicrodataScope::recipients;
    CurveGrid curves;
    std::optional<std::filesystem::path> output_dir; ///< not part of the run identity

    /// Throws ConfigError when a referenced file is missing or a value is out of range.
    void validate() const;
};

/// Relative paths resolve against base_dir, then against the shipped data
/// directory. Design ids resolve through the preset registry; schedules may
/// also be given inline. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json &j, const std::filesystem::path &base_dir);

/// Reads a scenario file or a run manifest (its "config" member).
ScenarioConfig load_config(const std::filesystem::path &path);

/// Self-contained form with absolute paths and inline schedules. Excludes the
/// output directory. parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ScenarioConfig &config);

std::string_view to_string(MicrodataScope s);

} // namespace wsim
