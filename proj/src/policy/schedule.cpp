#include "wsim/policy/schedule.hpp"
#include "wsim/core/error.hpp"

#include <cmath>

namespace wsim::policy {

std::string_view to_string(Scheme s) { return s == Scheme::cws ? "cws" : "pup"; }
std::string_view to_string(Basis b) { return b == Basis::apnp ? "apnp" : "gross_pay"; }

void PaymentSchedule::validate() const {
    const std::string where = "schedule '" + id + "': ";
    if (id.empty()) throw ConfigError("schedule without id");
    if (bands.empty()) throw ConfigError(where + "no bands");
    for (std::size_t b = 0; b < bands.size(); ++b) {
        const auto &band = bands[b];
        const std::string at = where + "band " + std::to_string(b + 1) + ": ";
        if (band.lower < Cents{0}) throw ConfigError(at + "lower bound must be >= 0");
        if (!(band.lower < band.upper)) throw ConfigError(at + "lower bound must be below upper bound");
        if (b > 0 && band.lower < bands[b - 1].upper) throw ConfigError(at + "overlaps or precedes the previous band");
        const auto &r = band.rule;
        switch (r.kind) {
        case PaymentRule::Kind::flat:
            if (r.amount < Cents{0}) throw ConfigError(at + "flat amount must be >= 0");
            break;
        case PaymentRule::Kind::proportional:
            if (!(r.rate > 0.0 && r.rate <= 1.0)) throw ConfigError(at + "rate must lie in (0, 1]");
            if (r.cap && *r.cap < Cents{0}) throw ConfigError(at + "cap must be >= 0");
            break;
        case PaymentRule::Kind::tapered: {
            if (scheme != Scheme::cws) throw ConfigError(at + "tapered rules apply to wage subsidies only");
            if (r.steps.empty()) throw ConfigError(at + "tapered rule needs at least one step");
            double prev = 0.0;
            for (const auto &s : r.steps) {
                if (!(s.below_share > prev && s.below_share <= 1.0))
                    throw ConfigError(at + "taper thresholds must increase within (0, 1]");
                if (s.amount < Cents{0}) throw ConfigError(at + "taper amount must be >= 0");
                prev = s.below_share;
            }
            break;
        }
        }
        if (scheme == Scheme::pup && r.kind != PaymentRule::Kind::flat)
            throw ConfigError(at + "unemployment payment bands must be flat");
    }
}

const PaymentBand *PaymentSchedule::find_band(Cents x) const noexcept {
    for (const auto &b : bands)
        if (b.contains(x)) return &b;
    return nullptr;
}

Cents PaymentSchedule::max_payment() const noexcept {
    Cents m{0};
    for (const auto &b : bands) {
        const auto &r = b.rule;
        switch (r.kind) {
        case PaymentRule::Kind::flat:
            m = max(m, r.amount);
            break;
        case PaymentRule::Kind::proportional:
            if (r.cap)
                m = max(m, *r.cap);
            else
                m = b.upper == kUnbounded ? kUnbounded : max(m, scale(b.upper, r.rate));
            break;
        case PaymentRule::Kind::tapered:
            for (const auto &s : r.steps) m = max(m, s.amount);
            break;
        }
        if (m == kUnbounded) break;
    }
    return m;
}

Cents evaluate_rule(const PaymentRule &rule, Cents basis, double employer_topup_share) {
    switch (rule.kind) {
    case PaymentRule::Kind::flat:
        return rule.amount;
    case PaymentRule::Kind::proportional: {
        const Cents p = scale(basis, rule.rate);
        return rule.cap ? min(p, *rule.cap) : p;
    }
    case PaymentRule::Kind::tapered:
        for (const auto &s : rule.steps)
            if (employer_topup_share < s.below_share) return s.amount;
        return Cents{0};
    }
    return Cents{0};
}

Cents cws_payment(const WageSubsidySchedule &schedule, Cents prev_gross, Cents prev_net, double employer_topup_share) {
    if (prev_gross < Cents{0} || prev_net < Cents{0}) throw ValidationError("cws_payment: earnings must be >= 0");
    if (!(employer_topup_share >= 0.0 && employer_topup_share <= 1.0))
        throw ValidationError("cws_payment: employer top-up share must lie in [0, 1]");
    const Cents basis = schedule.basis == Basis::apnp ? prev_net : prev_gross;
    const auto *band = schedule.find_band(basis);
    if (!band) return Cents{0};
    return evaluate_rule(band->rule, basis, employer_topup_share);
}

Cents cws_payment(const WageSubsidySchedule &schedule, double prev_gross, double prev_net, double employer_topup_share) {
    return cws_payment(schedule, Cents::from_euros(prev_gross), Cents::from_euros(prev_net), employer_topup_share);
}

Cents pup_payment(const PupSchedule &schedule, Cents prev_earnings) {
    if (prev_earnings < Cents{0}) throw ValidationError("pup_payment: previous earnings must be >= 0");
    const auto *band = schedule.find_band(prev_earnings);
    if (!band) return Cents{0};
    return evaluate_rule(band->rule, prev_earnings, 0.0);
}

Cents pup_payment(const PupSchedule &schedule, double prev_earnings) {
    return pup_payment(schedule, Cents::from_euros(prev_earnings));
}

} // namespace wsim::policy
