#include "wsim/igm/covariates.hpp"
#include "wsim/core/error.hpp"

#include <algorithm>
#include <charconv>

namespace wsim::igm {

namespace {

struct TokenName {
    Covariate::Kind kind;
    std::string_view name;
};

constexpr TokenName kTokens[] = {
    {Covariate::Kind::intercept, "intercept"},   {Covariate::Kind::age_band, "age_band"},
    {Covariate::Kind::gender, "gender"},         {Covariate::Kind::education, "education"},
    {Covariate::Kind::industry, "industry"},     {Covariate::Kind::occupation, "occupation"},
    {Covariate::Kind::sector, "sector"},         {Covariate::Kind::contract, "contract"},
    {Covariate::Kind::age, "age"},
};

std::string_view kind_name(Covariate::Kind k) {
    for (const auto &t : kTokens)
        if (t.kind == k) return t.name;
    return "?";
}

} // namespace

int Covariate::width() const noexcept {
    switch (kind) {
    case Kind::intercept:
    case Kind::gender:
    case Kind::sector:
    case Kind::contract:
    case Kind::age:
        return 1;
    case Kind::age_band:
        return kAgeBandCount - 1;
    case Kind::education:
        return 2;
    case Kind::industry:
    case Kind::occupation:
        return levels - 1;
    }
    return 0;
}

std::string Covariate::token() const {
    std::string t(kind_name(kind));
    if (kind == Kind::industry && levels != kDefaultIndustries) t += ":" + std::to_string(levels);
    if (kind == Kind::occupation && levels != kDefaultOccupations) t += ":" + std::to_string(levels);
    return t;
}

Covariate parse_covariate(std::string_view token) {
    auto colon = token.find(':');
    const auto name = token.substr(0, colon);
    for (const auto &t : kTokens) {
        if (t.name != name) continue;
        Covariate c{t.kind, 1};
        if (t.kind == Covariate::Kind::industry) c.levels = kDefaultIndustries;
        if (t.kind == Covariate::Kind::occupation) c.levels = kDefaultOccupations;
        if (colon != std::string_view::npos) {
            if (t.kind != Covariate::Kind::industry && t.kind != Covariate::Kind::occupation)
                throw ConfigError("covariate '" + std::string(name) + "' takes no level count");
            const auto digits = token.substr(colon + 1);
            int k = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
            if (ec != std::errc{} || ptr != digits.data() + digits.size() || k < 2)
                throw ConfigError("invalid level count in covariate '" + std::string(token) + "'");
            c.levels = k;
        }
        return c;
    }
    throw ConfigError("unknown covariate '" + std::string(token) + "'");
}

CovariateSet::CovariateSet(std::vector<Covariate> covariates) : covariates_(std::move(covariates)) {
    for (const auto &c : covariates_) width_ += c.width();
}

CovariateSet CovariateSet::parse(const std::vector<std::string> &tokens) {
    std::vector<Covariate> out;
    for (const auto &t : tokens) {
        auto c = parse_covariate(t);
        if (std::any_of(out.begin(), out.end(), [&](const Covariate &o) { return o.kind == c.kind; }))
            throw ConfigError("duplicate covariate '" + t + "'");
        out.push_back(c);
    }
    return CovariateSet(std::move(out));
}

std::vector<std::string> CovariateSet::tokens() const {
    std::vector<std::string> out;
    for (const auto &c : covariates_) out.push_back(c.token());
    return out;
}

std::vector<std::string> CovariateSet::names() const {
    std::vector<std::string> out;
    for (const auto &c : covariates_) {
        const std::string base(kind_name(c.kind));
        switch (c.kind) {
        case Covariate::Kind::intercept:
        case Covariate::Kind::age:
            out.push_back(base);
            break;
        case Covariate::Kind::gender:
            out.push_back("gender=female");
            break;
        case Covariate::Kind::sector:
            out.push_back("sector=public");
            break;
        case Covariate::Kind::contract:
            out.push_back("contract=temporary");
            break;
        case Covariate::Kind::age_band:
            for (int b = 1; b < kAgeBandCount; ++b) out.push_back(base + "=" + std::string(age_band_label(b)));
            break;
        case Covariate::Kind::education:
            out.push_back("education=medium");
            out.push_back("education=high");
            break;
        case Covariate::Kind::industry:
        case Covariate::Kind::occupation:
            for (int l = 1; l < c.levels; ++l) out.push_back(base + "=" + std::to_string(l));
            break;
        }
    }
    return out;
}

void CovariateSet::fill_row(const Person &p, double *out) const {
    std::fill(out, out + width_, 0.0);
    for (const auto &c : covariates_) {
        switch (c.kind) {
        case Covariate::Kind::intercept:
            out[0] = 1.0;
            break;
        case Covariate::Kind::gender:
            out[0] = p.gender == Gender::female ? 1.0 : 0.0;
            break;
        case Covariate::Kind::sector:
            out[0] = p.sector == Sector::public_sector ? 1.0 : 0.0;
            break;
        case Covariate::Kind::contract:
            out[0] = p.contract == Contract::temporary ? 1.0 : 0.0;
            break;
        case Covariate::Kind::age:
            out[0] = p.age / 10.0;
            break;
        case Covariate::Kind::age_band: {
            const int b = age_band(p.age);
            if (b >= 1) out[b - 1] = 1.0;
            break;
        }
        case Covariate::Kind::education: {
            const int e = static_cast<int>(p.education);
            if (e >= 1) out[e - 1] = 1.0;
            break;
        }
        case Covariate::Kind::industry:
        case Covariate::Kind::occupation: {
            const int code = c.kind == Covariate::Kind::industry ? p.industry : p.occupation;
            if (code >= 1 && code < c.levels) out[code - 1] = 1.0;
            break;
        }
        }
        out += c.width();
    }
}

double CovariateSet::linear_predictor(const Person &p, const Eigen::Ref<const Eigen::VectorXd> &coef) const {
    double row[256];
    std::vector<double> heap;
    double *buf = row;
    if (width_ > 256) {
        heap.resize(static_cast<std::size_t>(width_));
        buf = heap.data();
    }
    fill_row(p, buf);
    double eta = 0.0;
    for (int j = 0; j < width_; ++j) eta += buf[j] * coef[j];
    return eta;
}

Eigen::MatrixXd CovariateSet::design(std::span<const Person> persons) const {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x(static_cast<Eigen::Index>(persons.size()),
                                                                               width_);
    for (std::size_t i = 0; i < persons.size(); ++i) fill_row(persons[i], x.row(static_cast<Eigen::Index>(i)).data());
    return x;
}

Eigen::MatrixXd CovariateSet::design(std::span<const Person> persons, std::span<const std::size_t> rows) const {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x(static_cast<Eigen::Index>(rows.size()),
                                                                               width_);
    for (std::size_t i = 0; i < rows.size(); ++i) fill_row(persons[rows[i]], x.row(static_cast<Eigen::Index>(i)).data());
    return x;
}

} // namespace wsim::igm
