#include "wsim/policy/tax_benefit.hpp"
#include "wsim/core/csv.hpp"
#include "wsim/core/error.hpp"

#include <cmath>

namespace wsim::policy {

namespace {

using nlohmann::json;

void check_bands(const std::vector<RateBand> &bands, const char *name) {
    if (bands.empty()) throw ConfigError(std::string(name) + ": need at least one band");
    double prev = 0.0;
    for (const auto &b : bands) {
        if (!(b.rate >= 0.0 && b.rate <= 1.0)) throw ConfigError(std::string(name) + ": rates must lie in [0, 1]");
        if (!(b.upper > prev)) throw ConfigError(std::string(name) + ": band cutoffs must increase");
        prev = b.upper;
    }
    if (!std::isinf(bands.back().upper)) throw ConfigError(std::string(name) + ": last band must be unbounded");
}

void check_rate(double r, const char *name) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

void check_amount(double v, const char *name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite and >= 0");
}

std::vector<RateBand> bands_from(const json &j) {
    std::vector<RateBand> out;
    for (const auto &b : j) {
        RateBand r;
        if (b.contains("upper") && !b["upper"].is_null()) r.upper = b["upper"].get<double>();
        r.rate = b.at("rate").get<double>();
        out.push_back(r);
    }
    return out;
}

json bands_to(const std::vector<RateBand> &bands) {
    json out = json::array();
    for (const auto &b : bands) {
        json jb{{"rate", b.rate}};
        jb["upper"] = std::isinf(b.upper) ? json(nullptr) : json(b.upper);
        out.push_back(jb);
    }
    return out;
}

double stepped(const std::vector<double> &table, double increment, int children) {
    if (children <= 0 || table.empty()) return 0.0;
    const auto n = static_cast<int>(table.size());
    if (children <= n) return table[static_cast<std::size_t>(children - 1)];
    return table.back() + (children - n) * increment;
}

} // namespace

void TaxBenefitParams::validate() const {
    check_bands(income_tax_bands, "income_tax_bands");
    check_bands(social_charge_bands, "social_charge_bands");
    check_amount(tax_credit, "tax_credit");
    check_rate(social_insurance_rate, "social_insurance_rate");
    check_amount(social_insurance_threshold, "social_insurance_threshold");
    check_amount(child_benefit, "child_benefit");
    check_rate(wfp_withdrawal_rate, "wfp_withdrawal_rate");
    check_amount(wfp_max_increment, "wfp_max_increment");
    check_amount(wfp_threshold_increment, "wfp_threshold_increment");
    for (double v : wfp_max_payment) check_amount(v, "wfp_max_payment");
    for (double v : wfp_threshold) check_amount(v, "wfp_threshold");
    if (wfp_max_payment.size() != wfp_threshold.size())
        throw ConfigError("wfp_max_payment and wfp_threshold need one entry per child count");
    for (std::size_t i = 1; i < wfp_threshold.size(); ++i)
        if (!(wfp_threshold[i] > wfp_threshold[i - 1])) throw ConfigError("wfp_threshold must increase");
    if (!(indexation > 0.0) || !std::isfinite(indexation)) throw ConfigError("indexation must be positive");
}

double TaxBenefitParams::wfp_max_for(int children) const {
    return stepped(wfp_max_payment, wfp_max_increment, children) * indexation;
}

double TaxBenefitParams::wfp_threshold_for(int children) const {
    return stepped(wfp_threshold, wfp_threshold_increment, children);
}

Cents banded_tax(Cents income, const std::vector<RateBand> &bands) {
    if (income <= Cents{0}) return Cents{0};
    const double x = static_cast<double>(income.value());
    double lower = 0.0;
    double tax = 0.0;
    for (const auto &b : bands) {
        const double upper = std::isinf(b.upper) ? x : std::min(x, std::round(b.upper * 100.0));
        if (upper > lower) tax += (upper - lower) * b.rate;
        if (upper >= x) break;
        lower = upper;
    }
    return Cents{std::llround(tax)};
}

TaxResult baseline_tax(Cents gross, int age, const TaxBenefitParams &params) {
    TaxResult r;
    if (gross <= Cents{0}) return r;
    r.income_tax = max(Cents{0}, banded_tax(gross, params.income_tax_bands) - Cents::from_euros(params.tax_credit));
    if (age < params.pension_age && gross > Cents::from_euros(params.social_insurance_threshold))
        r.social_insurance = scale(gross, params.social_insurance_rate);
    r.social_charge = banded_tax(gross, params.social_charge_bands);
    return r;
}

TaxResult baseline_tax(Cents gross, const Person &person, const TaxBenefitParams &params) {
    return baseline_tax(gross, person.age, params);
}

Cents net_pay(Cents gross, const TaxBenefitParams &params) {
    return gross - baseline_tax(gross, 40, params).total();
}

double net_pay(double gross, const TaxBenefitParams &params) {
    return net_pay(Cents::from_euros(gross), params).euros();
}

Cents working_family_payment(int children, bool in_work, Cents family_income, const TaxBenefitParams &params) {
    if (children <= 0 || !in_work) return Cents{0};
    const double excess = std::max(0.0, family_income.euros() - params.wfp_threshold_for(children));
    const double amount = params.wfp_max_for(children) - params.wfp_withdrawal_rate * excess;
    return amount > 0.0 ? Cents::from_euros(amount) : Cents{0};
}

BenefitResult baseline_benefits(const Household &household, bool any_in_work, Cents family_income,
                                const TaxBenefitParams &params) {
    BenefitResult r;
    r.child_benefit = Cents::from_euros(params.child_benefit * params.indexation) * household.n_children;
    r.working_family_payment = working_family_payment(household.n_children, any_in_work, family_income, params);
    return r;
}

TaxBenefitParams tax_benefit_from_json(const json &j) {
    try {
        TaxBenefitParams p;
        if (j.contains("income_tax_bands")) p.income_tax_bands = bands_from(j["income_tax_bands"]);
        if (j.contains("social_charge_bands")) p.social_charge_bands = bands_from(j["social_charge_bands"]);
        p.tax_credit = j.value("tax_credit", p.tax_credit);
        p.social_insurance_rate = j.value("social_insurance_rate", p.social_insurance_rate);
        p.social_insurance_threshold = j.value("social_insurance_threshold", p.social_insurance_threshold);
        p.pension_age = j.value("pension_age", p.pension_age);
        p.child_benefit = j.value("child_benefit", p.child_benefit);
        p.wfp_max_payment = j.value("wfp_max_payment", p.wfp_max_payment);
        p.wfp_max_increment = j.value("wfp_max_increment", p.wfp_max_increment);
        p.wfp_threshold = j.value("wfp_threshold", p.wfp_threshold);
        p.wfp_threshold_increment = j.value("wfp_threshold_increment", p.wfp_threshold_increment);
        p.wfp_withdrawal_rate = j.value("wfp_withdrawal_rate", p.wfp_withdrawal_rate);
        p.indexation = j.value("indexation", p.indexation);
        p.validate();
        return p;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("tax-benefit parameters: ") + e.what());
    }
}

json to_json(const TaxBenefitParams &p) {
    return {{"income_tax_bands", bands_to(p.income_tax_bands)},
            {"tax_credit", p.tax_credit},
            {"social_insurance_rate", p.social_insurance_rate},
            {"social_insurance_threshold", p.social_insurance_threshold},
            {"pension_age", p.pension_age},
            {"social_charge_bands", bands_to(p.social_charge_bands)},
            {"child_benefit", p.child_benefit},
            {"wfp_max_payment", p.wfp_max_payment},
            {"wfp_max_increment", p.wfp_max_increment},
            {"wfp_threshold", p.wfp_threshold},
            {"wfp_threshold_increment", p.wfp_threshold_increment},
            {"wfp_withdrawal_rate", p.wfp_withdrawal_rate},
            {"indexation", p.indexation}};
}

TaxBenefitParams load_tax_benefit(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) throw ConfigError("tax-benefit file not found: " + path.string());
    try {
        return tax_benefit_from_json(json::parse(csv::read_file(path)));
    } catch (const json::parse_error &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace wsim::policy
