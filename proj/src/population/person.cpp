#include "wsim/population/person.hpp"
#include "wsim/core/error.hpp"

#include <array>
#include <cmath>

namespace wsim {

namespace {

template <class E, std::size_t N>
E parse_label(std::string_view s, const std::array<std::string_view, N> &labels, std::string_view what) {
    for (std::size_t i = 0; i < N; ++i)
        if (labels[i] == s) return static_cast<E>(i);
    throw SchemaError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 2> kGender{"male", "female"};
constexpr std::array<std::string_view, 3> kEducation{"low", "medium", "high"};
constexpr std::array<std::string_view, 2> kSector{"private", "public"};
constexpr std::array<std::string_view, 2> kContract{"permanent", "temporary"};
constexpr std::array<std::string_view, 5> kLabour{"employee", "self_employed", "unemployed", "retired", "inactive"};
constexpr std::array<std::string_view, 3> kCommute{"none", "car", "public"};
constexpr std::array<std::string_view, 4> kSource{"capital", "private_pension", "state_pension", "other"};
constexpr std::array<std::string_view, kAgeBandCount> kAgeBands{"16-24", "25-34", "35-44", "45-54", "55-64", "65+"};

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

} // namespace

std::optional<std::string> check_invariants(const Person &p) {
    if (p.age < 0 || p.age > 130) return "age out of range";
    if (!finite_nonneg(p.gross_earnings)) return "gross_earnings must be finite and >= 0";
    if (!finite_nonneg(p.prev_gross_earnings)) return "prev_gross_earnings must be finite and >= 0";
    if (!std::isfinite(p.prev_net_earnings) || p.prev_net_earnings < 0.0)
        return "prev_net_earnings must be finite and >= 0";
    if (p.prev_net_earnings > p.prev_gross_earnings) return "prev_net_earnings exceeds prev_gross_earnings";
    if (p.receives_cws && p.labour_state != LabourState::employee) return "receives_cws requires labour_state employee";
    if (p.receives_pup && p.labour_state != LabourState::unemployed) return "receives_pup requires labour_state unemployed";
    if (p.receives_cws && p.receives_pup) return "cannot receive both CWS and PUP";
    if (!p.in_work() && p.gross_earnings != 0.0) return "gross_earnings must be 0 when not in work";
    for (std::size_t i = 0; i < kIncomeSourceCount; ++i) {
        const auto &s = p.income_sources[i];
        if (!finite_nonneg(s.level)) return "income source " + std::string(kSource[i]) + " level must be >= 0";
        if (!s.present && s.level != 0.0)
            return "income source " + std::string(kSource[i]) + " absent but has non-zero level";
    }
    return std::nullopt;
}

std::optional<std::string> check_invariants(const Household &h) {
    if (h.member_ids.empty()) return "household has no members";
    if (h.n_adults < 1) return "household has no adult";
    if (h.n_adults + h.n_children != h.size()) return "adult/child counts do not match member list";
    if (!finite_nonneg(h.housing_cost)) return "housing_cost must be finite and >= 0";
    if (!finite_nonneg(h.capital_value)) return "capital_value must be finite and >= 0";
    if (!(std::isfinite(h.weight) && h.weight > 0.0)) return "weight must be positive";
    return std::nullopt;
}

std::string_view to_string(Gender v) { return kGender[static_cast<std::size_t>(v)]; }
std::string_view to_string(Education v) { return kEducation[static_cast<std::size_t>(v)]; }
std::string_view to_string(Sector v) { return kSector[static_cast<std::size_t>(v)]; }
std::string_view to_string(Contract v) { return kContract[static_cast<std::size_t>(v)]; }
std::string_view to_string(LabourState v) { return kLabour[static_cast<std::size_t>(v)]; }
std::string_view to_string(CommuteMode v) { return kCommute[static_cast<std::size_t>(v)]; }
std::string_view to_string(IncomeSource v) { return kSource[static_cast<std::size_t>(v)]; }

Gender parse_gender(std::string_view s) { return parse_label<Gender>(s, kGender, "gender"); }
Education parse_education(std::string_view s) { return parse_label<Education>(s, kEducation, "education"); }
Sector parse_sector(std::string_view s) { return parse_label<Sector>(s, kSector, "sector"); }
Contract parse_contract(std::string_view s) { return parse_label<Contract>(s, kContract, "contract"); }
LabourState parse_labour_state(std::string_view s) { return parse_label<LabourState>(s, kLabour, "labour_state"); }
CommuteMode parse_commute_mode(std::string_view s) { return parse_label<CommuteMode>(s, kCommute, "commute_mode"); }

int age_band(int age) noexcept {
    if (age < 16) return kNoCode;
    if (age < 25) return 0;
    if (age >= 65) return 5;
    return (age - 15) / 10;
}

std::string_view age_band_label(int band) {
    if (band < 0 || band >= kAgeBandCount) return "none";
    return kAgeBands[static_cast<std::size_t>(band)];
}

int parse_age_band(std::string_view label) {
    for (int i = 0; i < kAgeBandCount; ++i)
        if (kAgeBands[static_cast<std::size_t>(i)] == label) return i;
    throw SchemaError("unknown age band '" + std::string(label) + "'");
}

} // namespace wsim
