#pragma once

#include "wsim/core/money.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace wsim::policy {

inline constexpr Cents kUnbounded{std::numeric_limits<std::int64_t>::max()};

/// One row of a taper table: pays `amount` when the employer top-up share is
/// below `below_share`. Rows are checked in order; no match pays 0.
struct TaperStep {
    double below_share = 1.0;
    Cents amount{};
};

struct PaymentRule {
    enum class Kind { flat, proportional, tapered };
    Kind kind = Kind::flat;
    Cents amount{};               ///< flat
    double rate = 0.0;            ///< proportional
    std::optional<Cents> cap;     ///< proportional
    std::vector<TaperStep> steps; ///< tapered
};

/// Band over assessment-basis earnings: lower inclusive, upper exclusive.
struct PaymentBand {
    Cents lower{};
    Cents upper = kUnbounded;
    PaymentRule rule;

    [[nodiscard]] bool contains(Cents x) const noexcept { return lower <= x && x < upper; }
};

enum class Scheme { cws, pup };
enum class Basis { apnp, gross_pay };

/// A banded payment rule set. Used for both the wage subsidy designs and the
/// unemployment payment designs.
struct PaymentSchedule {
    std::string id;
    std::string label;
    Scheme scheme = Scheme::cws;
    Basis basis = Basis::gross_pay;
    std::string effective_date;
    bool taxable = false; ///< included in the in-year income tax base
    std::vector<PaymentBand> bands;

    /// Throws ConfigError describing the first violated invariant.
    void validate() const;
    /// Band containing x, or nullptr.
    [[nodiscard]] const PaymentBand *find_band(Cents x) const noexcept;
    /// Upper bound on any payment under this schedule.
    [[nodiscard]] Cents max_payment() const noexcept;
};

using WageSubsidySchedule = PaymentSchedule;
using PupSchedule = PaymentSchedule;

std::string_view to_string(Scheme s);
std::string_view to_string(Basis b);

/// Payment for a basis amount under one band's rule.
Cents evaluate_rule(const PaymentRule &rule, Cents basis, double employer_topup_share);

/// Wage subsidy payment. The assessment basis is prev_net (APNP) or
/// prev_gross depending on the schedule. Throws ValidationError on negative
/// inputs or a top-up share outside [0, 1].
Cents cws_payment(const WageSubsidySchedule &schedule, Cents prev_gross, Cents prev_net,
                  double employer_topup_share = 0.0);
Cents cws_payment(const WageSubsidySchedule &schedule, double prev_gross, double prev_net,
                  double employer_topup_share = 0.0);

/// Flat amount of the band containing prev_earnings.
Cents pup_payment(const PupSchedule &schedule, Cents prev_earnings);
Cents pup_payment(const PupSchedule &schedule, double prev_earnings);

} // namespace wsim::policy
