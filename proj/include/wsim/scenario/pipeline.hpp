#pragma once

#include "wsim/indicators/compensation.hpp"
#include "wsim/indicators/replacement.hpp"
#include "wsim/indicators/table4.hpp"
#include "wsim/scenario/config.hpp"
#include "wsim/scenario/labour_market.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wsim {

struct DesignResult {
    std::string design;
    ind::NetReplacementPanel rr_net;
    ind::RelativeReplacementBands rr_rel;
    ind::Table4Values table4;
};

struct WaveResult {
    WaveConfig wave;
    LabourMarketStats stats;
    std::uint64_t population_fingerprint = 0;
    std::vector<DesignResult> designs;
    std::vector<std::string> warnings;
};

/// Everything a run produces. `files` maps bundle file names to contents.
struct RunResult {
    std::uint64_t base_fingerprint = 0;
    std::vector<ind::CompensationPanel> compensation; ///< one per distinct CWS schedule
    std::vector<WaveResult> waves;
    ind::IndicatorTable indicators;
    std::vector<std::string> warnings;
    std::map<std::string, std::string> files;
};

/// Runs all stages and renders the bundle in memory. Failures are rethrown
/// as StageError naming the stage.
RunResult compute_scenario(const ScenarioConfig &config);

/// compute_scenario, then writes the bundle to `out` through a sibling
/// temporary directory renamed into place; nothing is left behind on failure.
RunResult run_scenario(const ScenarioConfig &config, const std::filesystem::path &out);

/// Adds `euros` to every flat band payment. Throws ConfigError for other rules.
policy::PupSchedule shift_payments(const policy::PupSchedule &schedule, double euros);

/// One budget-constraint CSV per configured design; returns the paths written.
std::vector<std::filesystem::path> emit_budget_constraints(const ScenarioConfig &config,
                                                           const std::filesystem::path &out_dir);

inline constexpr const char *kManifestName = "manifest.json";
inline constexpr const char *kIndicatorsName = "indicators.csv";

} // namespace wsim
