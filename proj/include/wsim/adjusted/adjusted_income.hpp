#pragma once

#include "wsim/alignment/ipf.hpp"
#include "wsim/population/person.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string_view>

namespace wsim {

/// Household income components, currency/week.
struct AdjustedIncomeComponents {
    double market = 0.0;       ///< Y_M, including any wage subsidy
    double taxes = 0.0;        ///< T
    double benefits = 0.0;     ///< B
    double housing = 0.0;      ///< H
    double capital_loss = 0.0; ///< Q
    double commuting = 0.0;
    double childcare = 0.0;
    double divisor = 1.0; ///< equivalence divisor

    [[nodiscard]] double work_costs() const noexcept { return commuting + childcare; }
    [[nodiscard]] double disposable() const noexcept { return market - taxes + benefits; }
    /// Y_M - T + B - H - Q - C.
    [[nodiscard]] double adjusted() const noexcept {
        return market - taxes + benefits - housing - capital_loss - work_costs();
    }
    [[nodiscard]] double equivalized() const noexcept { return adjusted() / divisor; }
    /// Throws ValidationError when T, H or C is negative or the divisor is below 1.
    void validate() const;
};

/// income / sqrt(size). Throws ValidationError for size < 1.
double equivalize(double household_income, int household_size);
double equivalence_divisor(int household_size);

/// Validated equivalized adjusted income.
double adjusted_disposable_income(const AdjustedIncomeComponents &components);

/// Weekly commuting cost for a household with `workers` members in work.
double commuting_cost(int workers);

/// Q = -capital_value * index_change / 52 for holders, 0 otherwise.
double capital_loss(double capital_value, double index_change, bool holder = true);

enum class FamilyType { lone_parent_one_child, lone_parent_two_plus, couple_one_child, couple_two_plus };
inline constexpr int kFamilyTypes = 4;
inline constexpr int kDeciles = 10;

std::string_view to_string(FamilyType t);
FamilyType parse_family_type(std::string_view s);
/// Family type of a household with children, nullopt without children.
std::optional<FamilyType> family_type(int n_adults, int n_children);

/// Weekly childcare cost per (family type, income decile), fitted by IPF so
/// that its row and column sums reproduce the supplied margins.
class ChildcareTable {
  public:
    ChildcareTable() = default;
    ChildcareTable(const std::array<double, kFamilyTypes> &family_totals, const std::array<double, kDeciles> &decile_totals,
                   const Eigen::MatrixXd &seed = Eigen::MatrixXd::Ones(kFamilyTypes, kDeciles));

    [[nodiscard]] bool empty() const noexcept { return cells_.size() == 0; }
    /// Decile is 1..10. Throws ValidationError naming the cell when absent.
    [[nodiscard]] double lookup(FamilyType type, int decile) const;
    [[nodiscard]] const Eigen::MatrixXd &cells() const noexcept { return cells_; }
    [[nodiscard]] int iterations() const noexcept { return iterations_; }

  private:
    Eigen::MatrixXd cells_;
    int iterations_ = 0;
};

/// Reads margins from a CSV with columns dimension,key,total where dimension
/// is "family_type" or "decile".
ChildcareTable load_childcare_table(const std::filesystem::path &path);
ChildcareTable parse_childcare_table(std::string_view text);

/// 0 without children or childcare use, otherwise the table cell.
double childcare_cost(const Household &household, int decile, const ChildcareTable &table);

} // namespace wsim
