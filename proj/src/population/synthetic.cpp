#include "wsim/population/synthetic.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wsim {

namespace {

using rng::Stream;

template <class Range>
void check_probs(const Range &probs, const char *name) {
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) throw ConfigError(std::string(name) + " must be non-negative");
        total += p;
    }
    if (!(total > 0.0)) throw ConfigError(std::string(name) + " must have a positive sum");
}

void check_rate(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

void check_sigma(double v, const char *name) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError(std::string(name) + " must be finite and >= 0");
}

void check_finite(double v, const char *name) {
    if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
}

constexpr std::array<int, 7> kAdultBandEdges{18, 25, 35, 45, 55, 65, 85};

// Per-entity counter helper so every draw has a fixed (stream, counter) slot.
struct Draws {
    std::uint64_t seed;
    std::uint64_t id;
    Stream stream;
    double u(std::uint64_t c) const { return rng::uniform(seed, id, stream, c); }
    double z(std::uint64_t c) const { return rng::standard_normal(seed, id, stream, c); }
};

} // namespace

void SyntheticSpec::validate() const {
    check_probs(household_size_probs, "household_size_probs");
    check_probs(adult_age_band_probs, "adult_age_band_probs");
    check_probs(education_probs, "education_probs");
    check_probs(industry_probs, "industry_probs");
    check_probs(occupation_probs, "occupation_probs");
    check_probs(commute_probs, "commute_probs");
    check_rate(couple_prob, "couple_prob");
    check_rate(extra_child_prob, "extra_child_prob");
    check_rate(employment_rate[0], "employment_rate");
    check_rate(employment_rate[1], "employment_rate");
    check_rate(elderly_employment_rate, "elderly_employment_rate");
    check_rate(unemployed_share, "unemployed_share");
    check_rate(employee_share, "employee_share");
    check_rate(public_share, "public_share");
    check_rate(temporary_share, "temporary_share");
    check_rate(net_ratio, "net_ratio");
    check_rate(capital_prob, "capital_prob");
    check_rate(private_pension_prob, "private_pension_prob");
    check_rate(state_pension_prob, "state_pension_prob");
    check_rate(other_income_prob, "other_income_prob");
    check_rate(housing_zero_prob, "housing_zero_prob");
    check_rate(childcare_prob, "childcare_prob");
    check_sigma(earnings_sigma, "earnings_sigma");
    check_sigma(capital_sigma, "capital_sigma");
    check_sigma(private_pension_sigma, "private_pension_sigma");
    check_sigma(other_income_sigma, "other_income_sigma");
    check_sigma(housing_sigma, "housing_sigma");
    check_finite(earnings_mu, "earnings_mu");
    check_finite(capital_mu, "capital_mu");
    check_finite(private_pension_mu, "private_pension_mu");
    check_finite(other_income_mu, "other_income_mu");
    check_finite(housing_mu, "housing_mu");
    for (double e : education_log_effect) check_finite(e, "education_log_effect");
    check_finite(female_log_effect, "female_log_effect");
    if (!(capital_yield > 0.0 && std::isfinite(capital_yield))) throw ConfigError("capital_yield must be positive");
    if (!(state_pension_amount >= 0.0)) throw ConfigError("state_pension_amount must be >= 0");
    if (retirement_age < kAdultAge) throw ConfigError("retirement_age must be >= 18");
}

PopulationSnapshot generate_synthetic(const SyntheticSpec &spec, std::size_t n, std::uint64_t seed,
                                      const NetPayFn &net_pay) {
    spec.validate();
    if (n < 1) throw ConfigError("population size must be >= 1");

    std::vector<Person> persons;
    std::vector<Household> households;
    persons.reserve(n);
    households.reserve(n / 2 + 1);

    std::int64_t next_person = 1;
    std::int64_t next_household = 1;
    while (persons.size() < n) {
        const auto hid = next_household++;
        const Draws hd{seed, static_cast<std::uint64_t>(hid), Stream::synth_household};
        int size = rng::categorical(hd.u(0), spec.household_size_probs) + 1;
        size = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(size), n - persons.size()));

        Household hh;
        hh.id = hid;
        int head_age = 0;
        bool young_child = false;
        for (int m = 0; m < size; ++m) {
            Person p;
            p.id = next_person++;
            p.household_id = hid;
            const Draws pd{seed, static_cast<std::uint64_t>(p.id), Stream::synth_person};
            const Draws ed{seed, static_cast<std::uint64_t>(p.id), Stream::synth_earnings};
            const Draws id{seed, static_cast<std::uint64_t>(p.id), Stream::synth_income};

            bool adult = true;
            if (m == 1) adult = hd.u(1) < spec.couple_prob;
            else if (m >= 2) adult = !(hd.u(static_cast<std::uint64_t>(m)) < spec.extra_child_prob);
            if (adult) {
                if (m == 1 && head_age > 0) {
                    p.age = std::clamp(static_cast<int>(std::lround(head_age + 4.0 * pd.z(0))), kAdultAge, 90);
                } else {
                    const int band = rng::categorical(pd.u(0), spec.adult_age_band_probs);
                    const int lo = kAdultBandEdges[static_cast<std::size_t>(band)];
                    const int hi = kAdultBandEdges[static_cast<std::size_t>(band) + 1];
                    p.age = lo + static_cast<int>(pd.u(1) * (hi - lo));
                }
            } else {
                p.age = static_cast<int>(pd.u(1) * kAdultAge);
                if (p.age < 13) young_child = true;
            }
            if (m == 0) head_age = p.age;
            p.gender = pd.u(2) < 0.5 ? Gender::male : Gender::female;
            p.education = static_cast<Education>(rng::categorical(pd.u(3), spec.education_probs));

            if (!p.is_child()) {
                const auto g = static_cast<std::size_t>(p.gender);
                const bool working_age = p.age < spec.retirement_age;
                const double rate = working_age ? spec.employment_rate[g] : spec.elderly_employment_rate;
                if (pd.u(4) < rate) {
                    p.labour_state =
                        pd.u(5) < spec.employee_share ? LabourState::employee : LabourState::self_employed;
                } else if (working_age) {
                    p.labour_state = pd.u(5) < spec.unemployed_share ? LabourState::unemployed : LabourState::inactive;
                } else {
                    p.labour_state = LabourState::retired;
                }
            }

            if (p.in_work()) {
                p.industry = rng::categorical(pd.u(6), spec.industry_probs);
                p.occupation = rng::categorical(pd.u(7), spec.occupation_probs);
                if (p.labour_state == LabourState::employee) {
                    p.sector = pd.u(8) < spec.public_share ? Sector::public_sector : Sector::private_sector;
                    p.contract = pd.u(9) < spec.temporary_share ? Contract::temporary : Contract::permanent;
                }
                double mu = spec.earnings_mu + spec.education_log_effect[static_cast<std::size_t>(p.education)];
                if (p.gender == Gender::female) mu += spec.female_log_effect;
                const double gross = std::round(std::exp(mu + spec.earnings_sigma * ed.z(0)) * 100.0) / 100.0;
                p.gross_earnings = gross;
                p.prev_gross_earnings = gross;
                const double net = net_pay ? net_pay(gross) : gross * spec.net_ratio;
                p.prev_net_earnings = std::clamp(std::round(net * 100.0) / 100.0, 0.0, gross);
                p.commute_mode = static_cast<CommuteMode>(rng::categorical(pd.u(10), spec.commute_probs));
            }

            auto set_source = [&](IncomeSource s, double level) {
                p.source(s) = {true, std::round(level * 100.0) / 100.0};
            };
            if (!p.is_child()) {
                if (id.u(0) < spec.capital_prob)
                    set_source(IncomeSource::capital, std::exp(spec.capital_mu + spec.capital_sigma * id.z(1)));
                if (p.labour_state == LabourState::retired && id.u(1) < spec.private_pension_prob)
                    set_source(IncomeSource::private_pension,
                               std::exp(spec.private_pension_mu + spec.private_pension_sigma * id.z(2)));
                if (p.age >= spec.retirement_age && id.u(2) < spec.state_pension_prob)
                    set_source(IncomeSource::state_pension, spec.state_pension_amount);
                if (id.u(3) < spec.other_income_prob)
                    set_source(IncomeSource::other, std::exp(spec.other_income_mu + spec.other_income_sigma * id.z(3)));
            }
            if (p.source(IncomeSource::capital).present)
                hh.capital_value += p.source(IncomeSource::capital).level * 52.0 / spec.capital_yield;

            hh.member_ids.push_back(p.id);
            persons.push_back(p);
        }
        hh.capital_value = std::round(hh.capital_value * 100.0) / 100.0;
        if (!(hd.u(10) < spec.housing_zero_prob))
            hh.housing_cost = std::round(std::exp(spec.housing_mu + spec.housing_sigma * hd.z(6)) * 100.0) / 100.0;
        hh.childcare_users = young_child && hd.u(11) < spec.childcare_prob;
        households.push_back(std::move(hh));
    }
    return PopulationSnapshot(std::move(persons), std::move(households));
}

} // namespace wsim
