#include "wsim/igm/params_io.hpp"
#include "wsim/core/error.hpp"
#include "wsim/igm/covariates.hpp"

#include <cmath>

namespace wsim::igm {

namespace {

using nlohmann::json;

json vec(const Eigen::VectorXd &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd to_vec(const json &j, const char *what) {
    if (!j.is_array()) throw ConfigError(std::string("model parameters: '") + what + "' must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(std::string("model parameters: '") + what + "' must be numeric");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
        if (!std::isfinite(v[static_cast<Eigen::Index>(i)]))
            throw ConfigError(std::string("model parameters: '") + what + "' has a non-finite entry");
    }
    return v;
}

template <class P>
void header_from(const json &j, P &p, const char *kind) {
    if (!j.is_object()) throw ConfigError("model parameters must be an object");
    if (j.value("kind", std::string()) != kind)
        throw ConfigError(std::string("model parameters: expected kind '") + kind + "'");
    p.equation = j.value("equation", std::string());
    p.covariates = j.at("covariates").get<std::vector<std::string>>();
    const auto cov = CovariateSet::parse(p.covariates);
    p.names = cov.names();
}

template <class P>
json header_to(const P &p, const char *kind) {
    return json{{"equation", p.equation}, {"kind", kind}, {"covariates", p.covariates}, {"names", p.names}};
}

} // namespace

json to_json(const BinaryModelParams &p) {
    auto j = header_to(p, "binary");
    j["coef"] = vec(p.coef);
    j["std_errors"] = vec(p.std_errors);
    return j;
}

json to_json(const MultinomialModelParams &p) {
    auto j = header_to(p, "multinomial");
    j["outcomes"] = p.outcomes;
    json coef = json::array(), se = json::array();
    for (Eigen::Index c = 0; c < p.coef.cols(); ++c) {
        coef.push_back(vec(p.coef.col(c)));
        se.push_back(p.std_errors.cols() == p.coef.cols() ? vec(p.std_errors.col(c)) : json::array());
    }
    j["coef"] = coef;
    j["std_errors"] = se;
    return j;
}

json to_json(const LevelModelParams &p) {
    auto j = header_to(p, "level");
    j["coef"] = vec(p.coef);
    j["std_errors"] = vec(p.std_errors);
    j["residual_sd"] = p.residual_sd;
    return j;
}

BinaryModelParams binary_from_json(const json &j) {
    try {
        BinaryModelParams p;
        header_from(j, p, "binary");
        p.coef = to_vec(j.at("coef"), "coef");
        if (p.coef.size() != static_cast<Eigen::Index>(p.names.size()))
            throw ConfigError("model parameters: coefficient count differs from covariate count");
        if (j.contains("std_errors")) p.std_errors = to_vec(j["std_errors"], "std_errors");
        return p;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("model parameters: ") + e.what());
    }
}

MultinomialModelParams multinomial_from_json(const json &j) {
    try {
        MultinomialModelParams p;
        header_from(j, p, "multinomial");
        p.outcomes = j.at("outcomes").get<std::vector<int>>();
        const auto &coef = j.at("coef");
        if (p.outcomes.size() < 2 || coef.size() != p.outcomes.size())
            throw ConfigError("model parameters: need one coefficient vector per outcome (at least two)");
        const auto width = static_cast<Eigen::Index>(p.names.size());
        p.coef.resize(width, static_cast<Eigen::Index>(p.outcomes.size()));
        for (std::size_t c = 0; c < coef.size(); ++c) {
            auto v = to_vec(coef[c], "coef");
            if (v.size() != width) throw ConfigError("model parameters: coefficient count differs from covariate count");
            p.coef.col(static_cast<Eigen::Index>(c)) = v;
        }
        if (!p.coef.col(0).isZero(0.0)) throw ConfigError("model parameters: reference outcome coefficients must be zero");
        p.std_errors = Eigen::MatrixXd::Zero(width, p.coef.cols());
        return p;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("model parameters: ") + e.what());
    }
}

LevelModelParams level_from_json(const json &j) {
    try {
        LevelModelParams p;
        header_from(j, p, "level");
        p.coef = to_vec(j.at("coef"), "coef");
        if (p.coef.size() != static_cast<Eigen::Index>(p.names.size()))
            throw ConfigError("model parameters: coefficient count differs from covariate count");
        if (j.contains("std_errors")) p.std_errors = to_vec(j["std_errors"], "std_errors");
        p.residual_sd = j.at("residual_sd").get<double>();
        if (!(p.residual_sd >= 0.0) || !std::isfinite(p.residual_sd))
            throw ConfigError("model parameters: residual_sd must be finite and >= 0");
        return p;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("model parameters: ") + e.what());
    }
}

} // namespace wsim::igm
