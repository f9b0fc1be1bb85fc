#include "wsim/population/population.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/hash.hpp"

#include <fstream>
#include <sstream>

namespace wsim {

bool operator==(const Person &a, const Person &b) {
    if (a.id != b.id || a.household_id != b.household_id || a.age != b.age || a.gender != b.gender ||
        a.education != b.education || a.industry != b.industry || a.occupation != b.occupation ||
        a.sector != b.sector || a.contract != b.contract || a.labour_state != b.labour_state ||
        a.gross_earnings != b.gross_earnings || a.prev_gross_earnings != b.prev_gross_earnings ||
        a.prev_net_earnings != b.prev_net_earnings || a.commute_mode != b.commute_mode ||
        a.receives_cws != b.receives_cws || a.receives_pup != b.receives_pup)
        return false;
    for (std::size_t i = 0; i < kIncomeSourceCount; ++i)
        if (a.income_sources[i].present != b.income_sources[i].present ||
            a.income_sources[i].level != b.income_sources[i].level)
            return false;
    return true;
}

bool operator==(const Household &a, const Household &b) {
    return a.id == b.id && a.member_ids == b.member_ids && a.n_adults == b.n_adults && a.n_children == b.n_children &&
           a.housing_cost == b.housing_cost && a.capital_value == b.capital_value &&
           a.childcare_users == b.childcare_users && a.mortgage_deferral == b.mortgage_deferral && a.weight == b.weight;
}

PopulationSnapshot::PopulationSnapshot(std::vector<Person> persons, std::vector<Household> households,
                                       std::vector<std::string> warnings)
    : persons_(std::move(persons)), households_(std::move(households)), warnings_(std::move(warnings)) {
    person_lookup_.reserve(persons_.size());
    for (std::size_t i = 0; i < persons_.size(); ++i) {
        const auto &p = persons_[i];
        if (auto why = check_invariants(p)) throw ValidationError("person " + std::to_string(p.id) + ": " + *why);
        if (!person_lookup_.emplace(p.id, i).second)
            throw ValidationError("duplicate person id " + std::to_string(p.id));
    }

    std::unordered_map<std::int64_t, std::size_t> household_lookup;
    household_lookup.reserve(households_.size());
    person_household_.assign(persons_.size(), static_cast<std::size_t>(-1));
    member_offsets_.reserve(households_.size() + 1);
    member_offsets_.push_back(0);
    member_index_.reserve(persons_.size());
    for (std::size_t h = 0; h < households_.size(); ++h) {
        auto &hh = households_[h];
        if (!household_lookup.emplace(hh.id, h).second)
            throw ValidationError("duplicate household id " + std::to_string(hh.id));
        hh.n_adults = 0;
        hh.n_children = 0;
        for (auto pid : hh.member_ids) {
            auto it = person_lookup_.find(pid);
            if (it == person_lookup_.end())
                throw ValidationError("household " + std::to_string(hh.id) + " lists unknown person " +
                                      std::to_string(pid));
            const auto &p = persons_[it->second];
            if (p.household_id != hh.id || person_household_[it->second] != static_cast<std::size_t>(-1))
                throw ValidationError("person " + std::to_string(pid) + " has inconsistent household membership");
            person_household_[it->second] = h;
            member_index_.push_back(it->second);
            (p.is_child() ? hh.n_children : hh.n_adults) += 1;
        }
        member_offsets_.push_back(member_index_.size());
        if (auto why = check_invariants(hh)) throw ValidationError("household " + std::to_string(hh.id) + ": " + *why);
    }
    for (std::size_t i = 0; i < persons_.size(); ++i)
        if (person_household_[i] == static_cast<std::size_t>(-1))
            throw ValidationError("person " + std::to_string(persons_[i].id) + " belongs to no household");
}

std::span<const std::size_t> PopulationSnapshot::member_indices(std::size_t household_index) const noexcept {
    const auto b = member_offsets_[household_index];
    const auto e = member_offsets_[household_index + 1];
    return {member_index_.data() + b, e - b};
}

std::size_t PopulationSnapshot::index_of_person(std::int64_t id) const {
    auto it = person_lookup_.find(id);
    if (it == person_lookup_.end()) throw Error("unknown person id " + std::to_string(id));
    return it->second;
}

std::uint64_t PopulationSnapshot::fingerprint() const {
    Fnv1a h;
    for (const auto &p : persons_) {
        h.update_pod(p.id);
        h.update_pod(p.household_id);
        h.update_pod(p.age);
        h.update_pod(p.gender);
        h.update_pod(p.education);
        h.update_pod(p.industry);
        h.update_pod(p.occupation);
        h.update_pod(p.sector);
        h.update_pod(p.contract);
        h.update_pod(p.labour_state);
        h.update_pod(p.gross_earnings);
        h.update_pod(p.prev_gross_earnings);
        h.update_pod(p.prev_net_earnings);
        for (const auto &s : p.income_sources) {
            h.update_pod(s.present);
            h.update_pod(s.level);
        }
        h.update_pod(p.commute_mode);
        h.update_pod(p.receives_cws);
        h.update_pod(p.receives_pup);
    }
    for (const auto &hh : households_) {
        h.update_pod(hh.id);
        for (auto m : hh.member_ids) h.update_pod(m);
        h.update_pod(hh.housing_cost);
        h.update_pod(hh.capital_value);
        h.update_pod(hh.childcare_users);
        h.update_pod(hh.mortgage_deferral);
        h.update_pod(hh.weight);
    }
    return h.digest();
}

bool operator==(const PopulationSnapshot &a, const PopulationSnapshot &b) {
    return a.persons_ == b.persons_ && a.households_ == b.households_;
}

// ---------------------------------------------------------------------------
// CSV format

const std::vector<std::string> &PopulationSchema::columns() {
    static const std::vector<std::string> cols{
        "person_id",       "household_id",    "age",          "gender",         "education",
        "industry",        "occupation",      "sector",       "contract",       "labour_state",
        "gross_earnings",  "prev_gross_earnings", "prev_net_earnings", "capital_income", "private_pension",
        "state_pension",   "other_income",    "commute_mode", "receives_cws",   "receives_pup",
        "housing_cost",    "capital_value",   "childcare_users", "mortgage_deferral", "household_weight"};
    return cols;
}

std::string PopulationSchema::header_for(const std::string &logical) const {
    auto it = rename.find(logical);
    return it == rename.end() ? logical : it->second;
}

namespace {

bool parse_flag(const std::string &s, const std::string &what, std::size_t row) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false" || s.empty()) return false;
    throw ValidationError("invalid flag '" + s + "' for " + what, row);
}

struct HouseholdAttrs {
    double housing_cost;
    double capital_value;
    bool childcare_users;
    bool mortgage_deferral;
    double weight;
    bool operator==(const HouseholdAttrs &) const = default;
};

} // namespace

PopulationSnapshot parse_population(std::string_view text, const PopulationSchema &schema) {
    const auto table = csv::parse_table(text);
    const auto &logical = PopulationSchema::columns();
    std::vector<std::size_t> col(logical.size());
    for (std::size_t c = 0; c < logical.size(); ++c) {
        const auto header = schema.header_for(logical[c]);
        auto idx = table.column(header);
        if (!idx) throw SchemaError("missing column '" + header + "'");
        col[c] = *idx;
    }

    std::vector<Person> persons;
    std::vector<Household> households;
    std::vector<HouseholdAttrs> attrs;
    std::unordered_map<std::int64_t, std::size_t> household_pos;
    std::vector<std::string> warnings;
    persons.reserve(table.rows.size());

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::size_t row_no = r + 1;
        const auto &row = table.rows[r];
        if (row.size() < table.header.size())
            throw ValidationError("expected " + std::to_string(table.header.size()) + " fields, found " +
                                      std::to_string(row.size()),
                                  row_no);
        auto field = [&](std::size_t c) -> const std::string & { return row[col[c]]; };
        auto num = [&](std::size_t c) {
            try {
                return csv::parse_double(field(c), logical[c]);
            } catch (const SchemaError &e) {
                throw ValidationError(e.what(), row_no);
            }
        };
        auto integer = [&](std::size_t c) {
            try {
                return csv::parse_int(field(c), logical[c]);
            } catch (const SchemaError &e) {
                throw ValidationError(e.what(), row_no);
            }
        };
        Person p;
        try {
            p.id = integer(0);
            p.household_id = integer(1);
            p.age = static_cast<int>(integer(2));
            p.gender = parse_gender(field(3));
            p.education = parse_education(field(4));
            p.industry = static_cast<int>(integer(5));
            p.occupation = static_cast<int>(integer(6));
            p.sector = parse_sector(field(7));
            p.contract = parse_contract(field(8));
            p.labour_state = parse_labour_state(field(9));
            p.commute_mode = parse_commute_mode(field(17));
        } catch (const SchemaError &e) {
            throw ValidationError(e.what(), row_no);
        }
        p.gross_earnings = num(10);
        p.prev_gross_earnings = num(11);
        p.prev_net_earnings = num(12);
        for (std::size_t s = 0; s < kIncomeSourceCount; ++s) {
            const double level = num(13 + s);
            p.income_sources[s] = {level > 0.0, level};
        }
        p.receives_cws = parse_flag(field(18), logical[18], row_no);
        p.receives_pup = parse_flag(field(19), logical[19], row_no);
        if (auto why = check_invariants(p)) throw ValidationError(*why, row_no);

        HouseholdAttrs a{num(20), num(21), parse_flag(field(22), logical[22], row_no),
                         parse_flag(field(23), logical[23], row_no), num(24)};
        auto [it, inserted] = household_pos.emplace(p.household_id, households.size());
        if (inserted) {
            Household h;
            h.id = p.household_id;
            h.housing_cost = a.housing_cost;
            h.capital_value = a.capital_value;
            h.childcare_users = a.childcare_users;
            h.mortgage_deferral = a.mortgage_deferral;
            h.weight = a.weight;
            households.push_back(std::move(h));
            attrs.push_back(a);
        } else if (!(attrs[it->second] == a)) {
            throw ValidationError("household " + std::to_string(p.household_id) +
                                      " attributes differ from an earlier member row",
                                  row_no);
        }
        households[it->second].member_ids.push_back(p.id);
        persons.push_back(p);
    }
    if (persons.empty()) warnings.emplace_back("population file contains a header but no rows");
    return PopulationSnapshot(std::move(persons), std::move(households), std::move(warnings));
}

PopulationSnapshot load_population(const std::filesystem::path &path, const PopulationSchema &schema) {
    if (!std::filesystem::exists(path)) throw SchemaError("population file not found: " + path.string());
    return parse_population(csv::read_file(path), schema);
}

std::string format_population(const PopulationSnapshot &snapshot, const PopulationSchema &schema) {
    std::ostringstream out;
    csv::Row header;
    for (const auto &c : PopulationSchema::columns()) header.push_back(schema.header_for(c));
    csv::write_row(out, header);
    const auto persons = snapshot.persons();
    const auto households = snapshot.households();
    for (std::size_t h = 0; h < households.size(); ++h) {
        const auto &hh = households[h];
        for (auto idx : snapshot.member_indices(h)) {
            const auto &p = persons[idx];
            csv::Row row{std::to_string(p.id),
                         std::to_string(p.household_id),
                         std::to_string(p.age),
                         std::string(to_string(p.gender)),
                         std::string(to_string(p.education)),
                         std::to_string(p.industry),
                         std::to_string(p.occupation),
                         std::string(to_string(p.sector)),
                         std::string(to_string(p.contract)),
                         std::string(to_string(p.labour_state)),
                         csv::format_double(p.gross_earnings),
                         csv::format_double(p.prev_gross_earnings),
                         csv::format_double(p.prev_net_earnings)};
            for (const auto &s : p.income_sources) row.push_back(csv::format_double(s.level));
            row.emplace_back(to_string(p.commute_mode));
            row.emplace_back(p.receives_cws ? "1" : "0");
            row.emplace_back(p.receives_pup ? "1" : "0");
            row.push_back(csv::format_double(hh.housing_cost));
            row.push_back(csv::format_double(hh.capital_value));
            row.emplace_back(hh.childcare_users ? "1" : "0");
            row.emplace_back(hh.mortgage_deferral ? "1" : "0");
            row.push_back(csv::format_double(hh.weight));
            csv::write_row(out, row);
        }
    }
    return out.str();
}

void write_population(const PopulationSnapshot &snapshot, const std::filesystem::path &path,
                      const PopulationSchema &schema) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << format_population(snapshot, schema);
}

} // namespace wsim
