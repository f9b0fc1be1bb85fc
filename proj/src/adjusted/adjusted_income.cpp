#include "wsim/adjusted/adjusted_income.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"

#include <cmath>

namespace wsim {

namespace {

constexpr std::array<double, 4> kCommuting{0.0, 9.17, 14.42, 23.82};
constexpr std::array<std::string_view, kFamilyTypes> kFamilyNames{"lone_parent_one_child", "lone_parent_two_plus",
                                                                  "couple_one_child", "couple_two_plus"};

} // namespace

void AdjustedIncomeComponents::validate() const {
    if (taxes < 0.0) throw ValidationError("taxes must be >= 0");
    if (housing < 0.0) throw ValidationError("housing cost must be >= 0");
    if (commuting < 0.0 || childcare < 0.0) throw ValidationError("work-related costs must be >= 0");
    if (!(divisor >= 1.0)) throw ValidationError("equivalence divisor must be >= 1");
}

double equivalence_divisor(int household_size) {
    if (household_size < 1) throw ValidationError("household size must be >= 1");
    return std::sqrt(static_cast<double>(household_size));
}

double equivalize(double household_income, int household_size) {
    return household_income / equivalence_divisor(household_size);
}

double adjusted_disposable_income(const AdjustedIncomeComponents &c) {
    c.validate();
    return c.equivalized();
}

double commuting_cost(int workers) {
    if (workers <= 0) return 0.0;
    if (workers <= 3) return kCommuting[static_cast<std::size_t>(workers)];
    return kCommuting[3] + (workers - 3) * (kCommuting[3] - kCommuting[2]);
}

double capital_loss(double capital_value, double index_change, bool holder) {
    if (!holder || capital_value <= 0.0) return 0.0;
    return -capital_value * index_change / 52.0;
}

std::string_view to_string(FamilyType t) { return kFamilyNames[static_cast<std::size_t>(t)]; }

FamilyType parse_family_type(std::string_view s) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
        if (kFamilyNames[i] == s) return static_cast<FamilyType>(i);
    throw SchemaError("unknown family type '" + std::string(s) + "'");
}

std::optional<FamilyType> family_type(int n_adults, int n_children) {
    if (n_children <= 0) return std::nullopt;
    if (n_adults <= 1) return n_children == 1 ? FamilyType::lone_parent_one_child : FamilyType::lone_parent_two_plus;
    return n_children == 1 ? FamilyType::couple_one_child : FamilyType::couple_two_plus;
}

ChildcareTable::ChildcareTable(const std::array<double, kFamilyTypes> &family_totals,
                               const std::array<double, kDeciles> &decile_totals, const Eigen::MatrixXd &seed) {
    align::IpfProblem problem;
    problem.seed = seed;
    problem.row_margins = Eigen::Map<const Eigen::VectorXd>(family_totals.data(), kFamilyTypes);
    problem.col_margins = Eigen::Map<const Eigen::VectorXd>(decile_totals.data(), kDeciles);
    auto result = align::ipf(problem, 1e-10);
    cells_ = std::move(result.fitted);
    iterations_ = result.iterations;
}

double ChildcareTable::lookup(FamilyType type, int decile) const {
    const auto row = static_cast<Eigen::Index>(type);
    if (decile < 1 || decile > kDeciles || row >= cells_.rows() || decile > cells_.cols())
        throw ValidationError("childcare table has no cell (" + std::string(to_string(type)) + ", decile " +
                              std::to_string(decile) + ")");
    return cells_(row, decile - 1);
}

ChildcareTable parse_childcare_table(std::string_view text) {
    const auto t = csv::parse_table(text);
    const auto dc = t.column("dimension");
    const auto kc = t.column("key");
    const auto vc = t.column("total");
    if (!dc || !kc || !vc) throw SchemaError("childcare margins need columns dimension,key,total");
    std::array<double, kFamilyTypes> fam{};
    std::array<double, kDeciles> dec{};
    std::array<bool, kFamilyTypes> fam_seen{};
    std::array<bool, kDeciles> dec_seen{};
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto &row = t.rows[r];
        const double v = csv::parse_double(row.at(*vc), "total");
        if (!(v >= 0.0)) throw ValidationError("childcare margin must be >= 0", r + 1);
        if (row.at(*dc) == "family_type") {
            const auto f = static_cast<std::size_t>(parse_family_type(row.at(*kc)));
            fam[f] = v;
            fam_seen[f] = true;
        } else if (row.at(*dc) == "decile") {
            const auto d = csv::parse_int(row.at(*kc), "decile");
            if (d < 1 || d > kDeciles) throw ValidationError("decile must be 1..10", r + 1);
            dec[static_cast<std::size_t>(d - 1)] = v;
            dec_seen[static_cast<std::size_t>(d - 1)] = true;
        } else {
            throw ValidationError("unknown margin dimension '" + row.at(*dc) + "'", r + 1);
        }
    }
    for (std::size_t f = 0; f < fam_seen.size(); ++f)
        if (!fam_seen[f]) throw ValidationError("childcare margins lack family type " + std::string(kFamilyNames[f]));
    for (std::size_t d = 0; d < dec_seen.size(); ++d)
        if (!dec_seen[d]) throw ValidationError("childcare margins lack decile " + std::to_string(d + 1));
    return ChildcareTable(fam, dec);
}

ChildcareTable load_childcare_table(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) throw SchemaError("childcare margins file not found: " + path.string());
    return parse_childcare_table(csv::read_file(path));
}

double childcare_cost(const Household &household, int decile, const ChildcareTable &table) {
    if (household.n_children == 0 || !household.childcare_users) return 0.0;
    const auto type = family_type(household.n_adults, household.n_children);
    return table.lookup(*type, decile);
}

} // namespace wsim
