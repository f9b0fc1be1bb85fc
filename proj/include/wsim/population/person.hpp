#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wsim {

enum class Gender : std::uint8_t { male, female };
enum class Education : std::uint8_t { low, medium, high };
enum class Sector : std::uint8_t { private_sector, public_sector };
enum class Contract : std::uint8_t { permanent, temporary };
enum class LabourState : std::uint8_t { employee, self_employed, unemployed, retired, inactive };
enum class CommuteMode : std::uint8_t { none, car, public_transport };

/// Non-labour income sources. Labour income lives in Person::gross_earnings.
enum class IncomeSource : std::uint8_t { capital, private_pension, state_pension, other };
inline constexpr std::size_t kIncomeSourceCount = 4;

inline constexpr int kNoCode = -1;
inline constexpr int kAdultAge = 18;

struct SourceIncome {
    bool present = false;
    double level = 0.0; ///< currency/week
};

struct Person {
    std::int64_t id = 0;
    std::int64_t household_id = 0;
    int age = 0;
    Gender gender = Gender::male;
    Education education = Education::low;
    int industry = kNoCode;   ///< NACE-style section index, kNoCode when never employed
    int occupation = kNoCode; ///< major occupation group index
    Sector sector = Sector::private_sector;
    Contract contract = Contract::permanent;
    LabourState labour_state = LabourState::inactive;
    double gross_earnings = 0.0;      ///< current, currency/week
    double prev_gross_earnings = 0.0; ///< pre-crisis reference, currency/week
    double prev_net_earnings = 0.0;   ///< average previous net pay (APNP)
    std::array<SourceIncome, kIncomeSourceCount> income_sources{};
    CommuteMode commute_mode = CommuteMode::none;
    bool receives_cws = false;
    bool receives_pup = false;

    [[nodiscard]] bool in_work() const noexcept {
        return labour_state == LabourState::employee || labour_state == LabourState::self_employed;
    }
    [[nodiscard]] bool is_child() const noexcept { return age < kAdultAge; }
    [[nodiscard]] const SourceIncome &source(IncomeSource s) const noexcept {
        return income_sources[static_cast<std::size_t>(s)];
    }
    SourceIncome &source(IncomeSource s) noexcept { return income_sources[static_cast<std::size_t>(s)]; }
};

struct Household {
    std::int64_t id = 0;
    std::vector<std::int64_t> member_ids;
    int n_adults = 0;
    int n_children = 0;
    double housing_cost = 0.0;  ///< H, currency/week
    double capital_value = 0.0; ///< value of share holdings, currency
    bool childcare_users = false;
    bool mortgage_deferral = false; ///< H treated as zero while deferred
    double weight = 1.0;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(member_ids.size()); }
};

/// First invariant violated by the person, if any.
std::optional<std::string> check_invariants(const Person &p);
std::optional<std::string> check_invariants(const Household &h);

std::string_view to_string(Gender v);
std::string_view to_string(Education v);
std::string_view to_string(Sector v);
std::string_view to_string(Contract v);
std::string_view to_string(LabourState v);
std::string_view to_string(CommuteMode v);
std::string_view to_string(IncomeSource v);

// Parsers throw SchemaError on unknown labels.
Gender parse_gender(std::string_view s);
Education parse_education(std::string_view s);
Sector parse_sector(std::string_view s);
Contract parse_contract(std::string_view s);
LabourState parse_labour_state(std::string_view s);
CommuteMode parse_commute_mode(std::string_view s);

/// Age bands used for calibration cells: 16-24, 25-34, 35-44, 45-54, 55-64, 65+.
inline constexpr int kAgeBandCount = 6;
/// Band index for ages >= 16, kNoCode below.
int age_band(int age) noexcept;
std::string_view age_band_label(int band);
int parse_age_band(std::string_view label);

} // namespace wsim
