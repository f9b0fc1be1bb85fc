#pragma once

#include "wsim/policy/schedule.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wsim::policy {

// Schedule JSON: {"id", "label", "scheme": "cws"|"pup", "basis": "apnp"|"gross_pay",
// "effective_date", "taxable", "bands": [{"lower", "upper" (null = unbounded),
// "rule": {"type": "flat", "amount"} | {"type": "proportional", "rate", "cap"}
//       | {"type": "tapered", "steps": [{"below_share", "amount"}]}}]}.
// Amounts are euros per week.

PaymentSchedule schedule_from_json(const nlohmann::json &j);
nlohmann::json to_json(const PaymentSchedule &s);
PaymentSchedule load_schedule(const std::filesystem::path &path);

/// A wage subsidy design paired with the unemployment payment in force at the same time.
struct DesignPair {
    std::string id;
    std::string label;
    std::string cws;
    std::string pup;
};

/// Named schedules shipped under <dir>/cws, <dir>/pup and the pairings in <dir>/designs.json.
class PresetRegistry {
  public:
    PresetRegistry() = default;
    explicit PresetRegistry(const std::filesystem::path &dir);

    [[nodiscard]] const PaymentSchedule &cws(const std::string &id) const;
    [[nodiscard]] const PaymentSchedule &pup(const std::string &id) const;
    [[nodiscard]] const DesignPair &design(const std::string &id) const;
    [[nodiscard]] bool has_cws(const std::string &id) const { return cws_.count(id) != 0; }
    [[nodiscard]] bool has_pup(const std::string &id) const { return pup_.count(id) != 0; }
    [[nodiscard]] bool has_design(const std::string &id) const;

    [[nodiscard]] std::vector<std::string> cws_ids() const;
    [[nodiscard]] std::vector<std::string> pup_ids() const;
    [[nodiscard]] const std::vector<DesignPair> &designs() const noexcept { return designs_; }

    void add(PaymentSchedule schedule);
    void add_design(DesignPair pair);

  private:
    std::map<std::string, PaymentSchedule> cws_;
    std::map<std::string, PaymentSchedule> pup_;
    std::vector<DesignPair> designs_;
};

/// WSIM_PRESET_DIR if set, else the data directory compiled into the build.
std::filesystem::path default_preset_dir();
std::filesystem::path default_data_dir();

} // namespace wsim::policy
