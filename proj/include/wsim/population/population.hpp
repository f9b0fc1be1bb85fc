#pragma once

#include "wsim/population/person.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace wsim {

/// Validated, immutable person/household collection. Safe to share across
/// parallel readers; every constructor path enforces the Person and
/// Household invariants.
class PopulationSnapshot {
  public:
    PopulationSnapshot() = default;

    /// Household adult/child counts are derived from member ages. Throws
    /// ValidationError when any invariant fails or membership is inconsistent.
    PopulationSnapshot(std::vector<Person> persons, std::vector<Household> households,
                       std::vector<std::string> warnings = {});

    [[nodiscard]] std::span<const Person> persons() const noexcept { return persons_; }
    [[nodiscard]] std::span<const Household> households() const noexcept { return households_; }
    [[nodiscard]] std::size_t size() const noexcept { return persons_.size(); }
    [[nodiscard]] bool empty() const noexcept { return persons_.empty(); }

    /// Positions in persons() of a household's members, in member order.
    [[nodiscard]] std::span<const std::size_t> member_indices(std::size_t household_index) const noexcept;
    [[nodiscard]] std::size_t household_index_of(std::size_t person_index) const noexcept {
        return person_household_[person_index];
    }
    [[nodiscard]] std::size_t index_of_person(std::int64_t id) const;

    [[nodiscard]] std::span<const std::string> warnings() const noexcept { return warnings_; }

    /// Content hash over every field; independent of warnings.
    [[nodiscard]] std::uint64_t fingerprint() const;

    friend bool operator==(const PopulationSnapshot &a, const PopulationSnapshot &b);

  private:
    std::vector<Person> persons_;
    std::vector<Household> households_;
    std::vector<std::size_t> member_offsets_;
    std::vector<std::size_t> member_index_;
    std::vector<std::size_t> person_household_;
    std::unordered_map<std::int64_t, std::size_t> person_lookup_;
    std::vector<std::string> warnings_;
};

bool operator==(const Person &a, const Person &b);
bool operator==(const Household &a, const Household &b);

/// Maps logical column names to the headers used in a particular file.
/// Columns not listed use their logical name.
struct PopulationSchema {
    std::map<std::string, std::string> rename;

    [[nodiscard]] std::string header_for(const std::string &logical) const;
    /// The fixed logical column list, in write order.
    static const std::vector<std::string> &columns();
};

/// Reads a person-level CSV (household attributes repeated on each member row).
/// Missing columns raise SchemaError; invariant violations raise
/// ValidationError citing the 1-based data row. A header-only file yields an
/// empty snapshot carrying a warning.
PopulationSnapshot load_population(const std::filesystem::path &path, const PopulationSchema &schema = {});
PopulationSnapshot parse_population(std::string_view text, const PopulationSchema &schema = {});

void write_population(const PopulationSnapshot &snapshot, const std::filesystem::path &path,
                      const PopulationSchema &schema = {});
std::string format_population(const PopulationSnapshot &snapshot, const PopulationSchema &schema = {});

} // namespace wsim
