// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "wsim/alignment/align.hpp"
#include "wsim/alignment/ipf.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/rng.hpp"
#include "wsim/igm/covariates.hpp"
#include "wsim/igm/models.hpp"
#include "wsim/igm/simulate.hpp"
#include "wsim/indicators/compensation.hpp"
#include "wsim/indicators/inequality.hpp"
#include "wsim/indicators/replacement.hpp"
#include "wsim/indicators/table4.hpp"
#include "wsim/policy/schedule.hpp"
#include "wsim/policy/schedule_io.hpp"
#include "wsim/policy/tax_benefit.hpp"
#include "wsim/population/synthetic.hpp"
#include "wsim/scenario/config.hpp"
#include "wsim/scenario/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace wsim;
namespace fs = std::filesystem;

namespace {

struct Check {
    std::size_t total = 0;
    std::size_t failed = 0;
    std::vector<std::string> messages;

    void expect(bool ok, const std::string &what) {
        ++total;
        if (!ok) {
            ++failed;
            if (messages.size() < 8) messages.push_back(what);
        }
    }
};

std::string fmt(double v, int decimals = 6) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << v;
    return os.str();
}

fs::path data_dir() { return policy::default_data_dir(); }

nlohmann::json example_json() {
    std::ifstream in(data_dir() / "examples/scenario.json");
    return nlohmann::json::parse(in);
}

ScenarioConfig example_config(std::size_t persons, std::uint64_t population_seed, std::size_t waves) {
    auto j = example_json();
    j["population"]["synthetic"]["persons"] = persons;
    j["population"]["synthetic"]["seed"] = population_seed;
    if (waves < j["waves"].size()) j["waves"].erase(j["waves"].begin() + static_cast<std::ptrdiff_t>(waves), j["waves"].end());
    j.erase("output_dir");
    return parse_config(j, data_dir() / "examples");
}

// ---------------------------------------------------------------------------
// 1. Schedule exactness against the reference band tables.

enum class RowKind { flat, proportional, tapered };

struct TableRow {
    const char *schedule;
    std::int64_t lower;                 // cents, inclusive
    std::optional<std::int64_t> upper;  // cents, exclusive
    RowKind kind;
    std::int64_t amount = 0;            // flat, cents
    int rate_pct = 0;                   // proportional
    std::optional<std::int64_t> cap;    // proportional, cents
};

constexpr std::int64_t E(double euros) { return static_cast<std::int64_t>(euros * 100.0 + 0.5); }

std::vector<TableRow> reference_rows() {
    using K = RowKind;
    std::vector<TableRow> rows = {
        {"ECRS", 0, std::nullopt, K::flat, E(203)},
        {"trTWSS", 0, E(586), K::proportional, 0, 70, E(410)},
        {"trTWSS", E(586), E(960), K::proportional, 0, 70, E(350)},
        {"trTWSS", E(960), std::nullopt, K::flat, 0},
        {"opTWSS", 0, E(412), K::proportional, 0, 85, std::nullopt},
        {"opTWSS", E(412), E(500), K::flat, E(350)},
        {"opTWSS", E(500), E(586), K::proportional, 0, 70, std::nullopt},
        {"opTWSS", E(586), E(960), K::tapered},
        {"opTWSS", E(960), std::nullopt, K::tapered},
        {"EWSS_Sep", 0, E(151.50), K::flat, 0},
        {"EWSS_Sep", E(151.50), E(203), K::flat, E(151.50)},
        {"EWSS_Sep", E(203), E(1462), K::flat, E(203)},
        {"EWSS_Sep", E(1462), std::nullopt, K::flat, 0},
        {"EWSS_Oct", 0, E(151.50), K::flat, 0},
        {"EWSS_Oct", E(151.50), E(203), K::flat, E(203)},
        {"EWSS_Oct", E(203), E(300), K::flat, E(250)},
        {"EWSS_Oct", E(300), E(400), K::flat, E(300)},
        {"EWSS_Oct", E(400), E(1462), K::flat, E(350)},
        {"EWSS_Oct", E(1462), std::nullopt, K::flat, 0},
    };
    struct PupColumn {
        const char *id;
        double top, upper_mid, lower_mid, bottom;
    };
    const PupColumn pup[] = {{"PUP_pre24Mar", 203, 203, 203, 203},
                             {"PUP_24Mar", 350, 350, 350, 350},
                             {"PUP_29Jun", 350, 350, 350, 203},
                             {"PUP_17Sep", 300, 300, 250, 203},
                             {"PUP_16Oct", 350, 300, 250, 203}};
    for (const auto &c : pup) {
        rows.push_back({c.id, E(400), std::nullopt, K::flat, E(c.top)});
        rows.push_back({c.id, E(300), E(400), K::flat, E(c.upper_mid)});
        rows.push_back({c.id, E(200), E(300), K::flat, E(c.lower_mid)});
        rows.push_back({c.id, 0, E(200), K::flat, E(c.bottom)});
    }
    return rows;
}

// Configured taper: the band table only names the approach.
std::int64_t configured_taper(double topup_share) {
    if (topup_share < 0.70) return E(350);
    if (topup_share < 0.85) return E(205);
    return 0;
}

std::int64_t expected_cents(const TableRow &r, std::int64_t x, double share) {
    switch (r.kind) {
    case RowKind::flat: return r.amount;
    case RowKind::proportional: {
        const std::int64_t p = (r.rate_pct * x + 50) / 100;
        return r.cap ? std::min(p, *r.cap) : p;
    }
    case RowKind::tapered: return configured_taper(share);
    }
    return -1;
}

Check criterion1() {
    Check c;
    const policy::PresetRegistry presets(policy::default_preset_dir());
    constexpr std::int64_t kFar = E(10000);
    for (const auto &r : reference_rows()) {
        const bool pup = std::string(r.schedule).rfind("PUP", 0) == 0;
        const auto &s = pup ? presets.pup(r.schedule) : presets.cws(r.schedule);
        const std::int64_t last = r.upper ? *r.upper - 1 : kFar;
        for (const std::int64_t x : {r.lower, r.lower + 1, last}) {
            const std::vector<double> shares = r.kind == RowKind::tapered ? std::vector<double>{0.5, 0.75, 0.9}
                                                                          : std::vector<double>{0.6};
            for (const double share : shares) {
                const Cents basis{x};
                const Cents got = pup ? policy::pup_payment(s, basis) : policy::cws_payment(s, basis, basis, share);
                const auto want = expected_cents(r, x, share);
                c.expect(got.value() == want, std::string(r.schedule) + " at " + to_string(basis) + ": got " +
                                                  to_string(got) + ", want " + to_string(Cents{want}));
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// 2. Compensation-rate panel against reference values.

Check criterion2() {
    Check c;
    struct Reference {
        const char *id;
        double bottom, median, top, average, tol;
    };
    const Reference reference[] = {{"ECRS", 1.00, 0.37, 0.14, 0.29, 0.05},
                                   {"trTWSS", 0.70, 0.60, 0.27, 0.43, 0.08},
                                   {"opTWSS", 0.85, 0.64, 0.27, 0.46, 0.08},
                                   {"EWSS_Sep", 0.87, 0.37, 0.14, 0.28, 0.05},
                                   {"EWSS_Oct", 1.00, 0.64, 0.25, 0.45, 0.05}};
    const policy::PresetRegistry presets(policy::default_preset_dir());
    const auto tax = policy::load_tax_benefit(data_dir() / "tax_benefit_default.json");
    for (const auto &p : reference) {
        const auto panel = ind::compensation_panel(presets.cws(p.id), tax);
        const std::pair<const char *, std::pair<double, double>> cells[] = {{"bottom", {panel.bottom(), p.bottom}},
                                                                            {"median", {panel.median(), p.median}},
                                                                            {"top", {panel.top(), p.top}},
                                                                            {"average", {panel.average, p.average}}};
        for (const auto &[name, v] : cells)
            c.expect(std::abs(v.first - v.second) <= p.tol + 1e-12,
                     std::string(p.id) + " " + name + ": " + fmt(v.first, 3) + " vs " + fmt(v.second, 2));
        if (p.bottom == 1.0)
            c.expect(panel.bottom() == 1.0, std::string(p.id) + " bottom " + fmt(panel.bottom(), 15) + " not exactly 1");
    }
    return c;
}

// ---------------------------------------------------------------------------
// 3. Gini against an O(n^2) pairwise computation; RS and Kakwani identities.

double pairwise_gini(const std::vector<double> &x, const std::vector<double> &w) {
    long double num = 0.0L, wsum = 0.0L, mean = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        wsum += w[i];
        mean += static_cast<long double>(w[i]) * x[i];
        for (std::size_t j = 0; j < x.size(); ++j)
            num += static_cast<long double>(w[i]) * w[j] * std::fabs(static_cast<long double>(x[i]) - x[j]);
    }
    mean /= wsum;
    return static_cast<double>(num / (2.0L * wsum * wsum * mean));
}

Check criterion3() {
    Check c;
    std::mt19937_64 gen(20200315);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 1000)(gen);
        std::vector<double> x(n), y(n), b(n), w(n, 1.0);
        std::lognormal_distribution<double> ln(6.0, 0.8);
        std::uniform_int_distribution<int> coin(0, 9);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = coin(gen) == 0 ? 0.0 : ln(gen);
            if (coin(gen) == 1 && i > 0) x[i] = x[i - 1];
            b[i] = 100.0 + 0.1 * ln(gen);
            y[i] = x[i] + b[i];
        }
        if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) x[0] = 1.0;
        const bool weighted = rep % 2 == 1;
        if (weighted)
            for (auto &wi : w) wi = std::uniform_int_distribution<int>(1, 5)(gen);
        const std::vector<double> none;
        const auto &ws = weighted ? w : none;
        const double g = ind::gini(x, ws);
        const double oracle = pairwise_gini(x, w);
        c.expect(std::abs(g - oracle) <= 1e-12, "rep " + std::to_string(rep) + ": gini " + fmt(g, 15) + " vs " +
                                                    fmt(oracle, 15));
        const double rs = ind::reynolds_smolensky(x, y, ws);
        const double sr = ind::reynolds_smolensky(y, x, ws);
        c.expect(rs == -sr, "rep " + std::to_string(rep) + ": RS not antisymmetric");
        const auto k1 = ind::kakwani(b, x, ind::KakwaniConvention::concentration_minus_gini, ws);
        const auto k2 = ind::kakwani(b, x, ind::KakwaniConvention::gini_minus_concentration, ws);
        c.expect(k1.value == -k2.value, "rep " + std::to_string(rep) + ": Kakwani conventions not negations");
    }
    return c;
}

// ---------------------------------------------------------------------------
// 4. Table 4 internal identity.

Check criterion4() {
    Check c;
    const auto run = compute_scenario(example_config(30000, 4, 3));
    for (const auto &w : run.waves)
        for (const auto &d : w.designs) {
            const auto &r = d.table4.rows;
            c.expect(std::abs(r[4] - (r[3] - r[2])) <= 1e-12,
                     w.wave.id + "/" + d.design + ": row 5 " + fmt(r[4], 15) + " vs " + fmt(r[3] - r[2], 15));
        }
    const double rounded[][3] = {{34.3, 31.8, 2.5}, {33.2, 31.1, 2.1}, {34.2, 30.8, 3.4}, {34.0, 31.9, 2.1}, {34.8, 31.0, 3.8}};
    for (const auto &p : rounded)
        c.expect(std::abs((p[0] - p[1]) - p[2]) <= 1e-12, fmt(p[0], 1) + " - " + fmt(p[1], 1) + " != " + fmt(p[2], 1));
    return c;
}

// ---------------------------------------------------------------------------
// 5. IPF margins and minimum cross-entropy solution.

// Minimises sum m log(m / s) subject to the margins by Newton's method on the
// dual: m_ij = s_ij exp(u_i + v_j), last column scale fixed.
Eigen::MatrixXd min_cross_entropy(const Eigen::MatrixXd &s, const Eigen::VectorXd &rows, const Eigen::VectorXd &cols) {
    const auto r = s.rows(), k = s.cols();
    const auto dim = r + k - 1;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    const auto fitted = [&](const Eigen::VectorXd &t) {
        Eigen::MatrixXd m(r, k);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < k; ++j) m(i, j) = s(i, j) * std::exp(t[i] + (j < k - 1 ? t[r + j] : 0.0));
        return m;
    };
    const auto dual = [&](const Eigen::VectorXd &t) {
        const Eigen::MatrixXd m = fitted(t);
        double f = m.sum();
        for (Eigen::Index i = 0; i < r; ++i) f -= rows[i] * t[i];
        for (Eigen::Index j = 0; j < k - 1; ++j) f -= cols[j] * t[r + j];
        return f;
    };
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::MatrixXd m = fitted(theta);
        Eigen::VectorXd grad(dim);
        grad.head(r) = m.rowwise().sum() - rows;
        grad.tail(k - 1) = (m.colwise().sum().transpose() - cols).head(k - 1);
        if (grad.lpNorm<Eigen::Infinity>() < 1e-13 * rows.sum()) break;
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index i = 0; i < r; ++i) h(i, i) = m.row(i).sum();
        for (Eigen::Index j = 0; j < k - 1; ++j) {
            h(r + j, r + j) = m.col(j).sum();
            for (Eigen::Index i = 0; i < r; ++i) h(i, r + j) = h(r + j, i) = m(i, j);
        }
        const Eigen::VectorXd step = h.fullPivLu().solve(grad);
        double t = 1.0;
        const double f0 = dual(theta);
        while (t > 1e-10 && dual(theta - t * step) > f0) t *= 0.5;
        theta -= t * step;
    }
    return fitted(theta);
}

Check criterion5() {
    Check c;
    std::mt19937_64 gen(1977);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const int r = std::uniform_int_distribution<int>(2, 20)(gen);
        const int k = std::uniform_int_distribution<int>(2, 20)(gen);
        Eigen::MatrixXd seed(r, k), truth(r, k);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < k; ++j) seed(i, j) = unit(gen) < 0.1 ? 0.0 : 0.05 + 10.0 * unit(gen);
        for (int i = 0; i < r; ++i) seed(i, i % k) = std::max(seed(i, i % k), 0.5);
        for (int j = 0; j < k; ++j) seed(j % r, j) = std::max(seed(j % r, j), 0.5);
        truth = seed;
        for (int i = 0; i < r; ++i) truth.row(i) *= 0.2 + 5.0 * unit(gen);
        for (int j = 0; j < k; ++j) truth.col(j) *= 0.2 + 5.0 * unit(gen);
        const align::IpfProblem p{seed, truth.rowwise().sum(), truth.colwise().sum().transpose()};
        try {
            const auto res = align::ipf(p);
            const double resid = align::margin_residual(res.fitted, p.row_margins, p.col_margins);
            c.expect(resid <= 1e-8 && res.iterations <= 1000,
                     std::to_string(r) + "x" + std::to_string(k) + ": residual " + fmt(resid, 12) + " after " +
                         std::to_string(res.iterations) + " sweeps");
        } catch (const Error &e) {
            c.expect(false, std::to_string(r) + "x" + std::to_string(k) + ": " + e.what());
        }
    }
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::MatrixXd seed(3, 4);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) seed(i, j) = 0.1 + 5.0 * unit(gen);
        Eigen::VectorXd rows(3), cols(4);
        for (int i = 0; i < 3; ++i) rows[i] = 1.0 + 20.0 * unit(gen);
        for (int j = 0; j < 4; ++j) cols[j] = 1.0 + 20.0 * unit(gen);
        cols *= rows.sum() / cols.sum();
        const auto res = align::ipf({seed, rows, cols});
        const Eigen::MatrixXd oracle = min_cross_entropy(seed, rows, cols);
        for (int i = 1; i < 3; ++i)
            for (int j = 1; j < 4; ++j) {
                const auto ratio = [&](const Eigen::MatrixXd &m) { return m(0, 0) * m(i, j) / (m(0, j) * m(i, 0)); };
                const double got = ratio(res.fitted), want = ratio(oracle), seeded = ratio(seed);
                c.expect(std::abs(got - want) <= 1e-6 * want && std::abs(got - seeded) <= 1e-6 * seeded,
                         "3x4 odds ratio (" + std::to_string(i) + "," + std::to_string(j) + "): " + fmt(got, 10) +
                             " vs " + fmt(want, 10));
            }
        c.expect((res.fitted - oracle).cwiseAbs().maxCoeff() <= 1e-6 * oracle.maxCoeff(), "3x4 cells differ");
    }
    return c;
}

// ---------------------------------------------------------------------------
// 6. Alignment exactness and invariance.

Check criterion6() {
    Check c;
    std::mt19937_64 gen(424242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 2000)(gen);
        std::vector<double> p(n), u(n);
        std::vector<std::int64_t> ids(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = unit(gen) < 0.05 ? 0.5 : unit(gen);
            u[i] = unit(gen);
            ids[i] = static_cast<std::int64_t>(n - i) * 7;
        }
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, n)(gen);
        const auto sel = align::align_binary(p, u, ids, k);
        c.expect(static_cast<std::size_t>(std::count(sel.begin(), sel.end(), 1)) == k, "binary count differs from target");
        const auto none = align::align_binary(p, u, ids, 0);
        const auto all = align::align_binary(p, u, ids, n);
        c.expect(std::count(none.begin(), none.end(), 1) == 0, "k = 0 selects units");
        c.expect(static_cast<std::size_t>(std::count(all.begin(), all.end(), 1)) == n, "k = n leaves units out");

        std::vector<double> stat(n);
        for (std::size_t i = 0; i < n; ++i) stat[i] = align::binary_statistic(p[i], u[i]);
        const std::vector<std::function<double(double)>> transforms = {
            [](double s) { return std::atan(s); }, [](double s) { return s * s * s + 2.0 * s; },
            [](double s) { return 3.0 * s - 11.0; }, [](double s) { return std::tanh(s / 8.0); }};
        for (const auto &f : transforms) {
            std::vector<double> t(n);
            std::transform(stat.begin(), stat.end(), t.begin(), f);
            c.expect(align::select_top_k(t, ids, k) == sel, "selection changed under a monotone transform");
        }

        const int kk = std::uniform_int_distribution<int>(2, 6)(gen);
        std::vector<double> scores(n * static_cast<std::size_t>(kk));
        for (auto &s : scores) s = align::multinomial_score(0.05 + unit(gen), unit(gen));
        std::vector<double> wts(static_cast<std::size_t>(kk));
        for (auto &w : wts) w = unit(gen);
        const auto targets = align::apportion(wts, n);
        c.expect(std::accumulate(targets.begin(), targets.end(), std::size_t{0}) == n, "apportion total differs");
        const auto assigned = align::align_multinomial(scores, kk, ids, targets);
        for (int j = 0; j < kk; ++j)
            c.expect(static_cast<std::size_t>(std::count(assigned.begin(), assigned.end(), j)) ==
                         targets[static_cast<std::size_t>(j)],
                     "multinomial count differs from target");
    }
    return c;
}

// ---------------------------------------------------------------------------
// 7. Estimator recovery and estimation-data reproduction.

Check criterion7() {
    Check c;
    constexpr int kReps = 100;
    constexpr Eigen::Index n = 50000;
    const Eigen::Vector3d beta(-0.4, 0.8, -1.2);
    const Eigen::Vector3d theta(5.5, 0.3, -0.25);
    const double sd = 0.6;
    int binary_ok = 0, level_ok = 0;
    for (int rep = 0; rep < kReps; ++rep) {
        std::mt19937_64 gen(9000 + static_cast<std::uint64_t>(rep));
        std::normal_distribution<double> z(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::MatrixXd x(n, 3);
        Eigen::VectorXd y(n);
        std::vector<double> level(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i, 0) = 1.0;
            x(i, 1) = z(gen);
            x(i, 2) = unit(gen) < 0.4 ? 1.0 : 0.0;
            const double eta = x.row(i).dot(beta);
            y[i] = unit(gen) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
            level[static_cast<std::size_t>(i)] = std::exp(x.row(i).dot(theta) + sd * z(gen));
        }
        const auto bm = igm::fit_binary(x, y);
        const auto lm = igm::fit_level(x, level);
        bool bok = true, lok = true;
        for (int j = 0; j < 3; ++j) {
            bok = bok && std::abs(bm.coef[j] - beta[j]) <= 3.0 * bm.std_errors[j];
            lok = lok && std::abs(lm.coef[j] - theta[j]) <= 3.0 * lm.std_errors[j];
        }
        binary_ok += bok;
        level_ok += lok;
    }
    c.expect(binary_ok >= 95, "fit_binary within 3 SE in " + std::to_string(binary_ok) + "/100");
    c.expect(level_ok >= 95, "fit_level within 3 SE in " + std::to_string(level_ok) + "/100");

    const auto pop = generate_synthetic(SyntheticSpec{}, 50000, 21);
    const auto persons = pop.persons();
    const auto cov = igm::CovariateSet::parse({"intercept", "gender", "education", "age_band", "sector"});
    std::vector<std::size_t> adults;
    for (std::size_t i = 0; i < persons.size(); ++i)
        if (!persons[i].is_child()) adults.push_back(i);
    const auto xa = cov.design(persons, adults);
    Eigen::VectorXd work(static_cast<Eigen::Index>(adults.size()));
    std::vector<Person> sample;
    std::vector<std::int8_t> observed;
    std::vector<double> levels;
    std::vector<std::int64_t> ids;
    std::vector<std::size_t> workers;
    std::vector<double> worker_levels;
    for (std::size_t k = 0; k < adults.size(); ++k) {
        const auto &p = persons[adults[k]];
        const bool w = p.in_work() && p.gross_earnings > 0.0;
        work[static_cast<Eigen::Index>(k)] = w ? 1.0 : 0.0;
        sample.push_back(p);
        observed.push_back(w ? 1 : 0);
        levels.push_back(w ? p.gross_earnings : 0.0);
        ids.push_back(p.id);
        if (w) {
            workers.push_back(adults[k]);
            worker_levels.push_back(p.gross_earnings);
        }
    }
    auto bm = igm::fit_binary(xa, work);
    bm.covariates = cov.tokens();
    const auto draws = igm::simulate_presence(bm, sample, 31, rng::Stream::in_work, observed);
    auto lm = igm::fit_level(cov.design(persons, workers), worker_levels);
    lm.covariates = cov.tokens();
    const auto store = igm::recover_residuals(lm, xa, levels, ids, 31, rng::Stream::earnings_level);
    std::vector<std::uint8_t> present(sample.size());
    for (std::size_t k = 0; k < sample.size(); ++k) present[k] = draws[k].flag;
    const auto sim = igm::simulate_level(lm, store, sample, present);
    std::size_t presence_mismatch = 0, level_mismatch = 0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        presence_mismatch += draws[k].flag != (observed[k] == 1);
        level_mismatch += std::abs(sim[k] - levels[k]) > 1e-9 * std::max(1.0, levels[k]);
    }
    c.expect(presence_mismatch == 0, std::to_string(presence_mismatch) + " simulated presence flags differ from observed");
    c.expect(level_mismatch == 0, std::to_string(level_mismatch) + " simulated levels differ from observed");
    return c;
}

// ---------------------------------------------------------------------------
// 8. Raising every PUP band payment weakly raises the share with RR_rel >= 1.

Check criterion8() {
    Check c;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto base = example_config(6000, 100 + s, 1);
        base.seed = 7000 + s;
        auto raised = base;
        raised.pup_band_shift = 50.0;
        const auto a = compute_scenario(base);
        const auto b = compute_scenario(raised);
        for (std::size_t w = 0; w < a.waves.size(); ++w)
            for (std::size_t d = 0; d < a.waves[w].designs.size(); ++d) {
                const double before = a.waves[w].designs[d].rr_rel.band_100;
                const double after = b.waves[w].designs[d].rr_rel.band_100;
                c.expect(after >= before, "population " + std::to_string(s) + " " + a.waves[w].designs[d].design +
                                              ": " + fmt(before, 4) + " -> " + fmt(after, 4));
            }
    }
    return c;
}

// ---------------------------------------------------------------------------
// 9. Determinism and scale.

std::map<std::string, std::string> read_dir(const fs::path &dir) {
    std::map<std::string, std::string> out;
    for (const auto &e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        out[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
    }
    return out;
}

Check criterion9(double &seconds) {
    Check c;
    const auto tmp = fs::temp_directory_path() / "wsim_acceptance";
    fs::remove_all(tmp);
    const auto small = example_config(40000, 11, 3);
    run_scenario(small, tmp / "a");
    run_scenario(small, tmp / "b");
    const auto a = read_dir(tmp / "a"), b = read_dir(tmp / "b");
    c.expect(!a.empty() && a == b, "bundles for the same config differ");

    const auto big = example_config(1000000, 11, 3);
    const auto t0 = std::chrono::steady_clock::now();
    run_scenario(big, tmp / "big");
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(seconds < 30.0, "1,000,000 persons took " + fmt(seconds, 1) + " s");
    fs::remove_all(tmp);
    return c;
}

// ---------------------------------------------------------------------------
// 10. Table layouts.

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            row.push_back(cell);
            cell.clear();
        } else if (ch == '\n') {
            row.push_back(cell);
            rows.push_back(row);
            row.clear();
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    if (!cell.empty() || !row.empty()) {
        row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

// "(3) Gini in Adjusted disposable income ((2) - ...)" -> "(3) Gini in Adjusted disposable income".
std::string row_key(std::string label) {
    const auto open = label.find(" (", 1);
    if (open != std::string::npos) label.resize(open);
    for (const std::string from : {"≥", ">"}) {
        const auto pos = label.find(from);
        if (pos != std::string::npos) {
            label.replace(pos, from.size(), ">=");
            break;
        }
    }
    const auto july = label.find("(July)");
    if (july != std::string::npos) label.replace(july, 6, "(Jul)");
    return label;
}

int decimals_of(const std::string &cell) {
    const auto dot = cell.find('.');
    return dot == std::string::npos ? 0 : static_cast<int>(cell.size() - dot - 1);
}

struct Layout {
    std::vector<std::string> header;
    std::vector<std::string> rows;          // first-column labels, section headings included
    std::vector<int> decimals;              // per row, -1 for section headings
};

void compare_layout(Check &c, const std::string &name, const std::string &csv, const Layout &want) {
    const auto got = parse_csv(csv);
    c.expect(!got.empty(), name + ": empty");
    if (got.empty()) return;
    std::vector<std::string> header_got, header_want;
    for (const auto &h : got[0]) header_got.push_back(row_key(h));
    for (const auto &h : want.header) header_want.push_back(row_key(h));
    c.expect(header_got == header_want, name + ": header differs");
    c.expect(got.size() == want.rows.size() + 1, name + ": " + std::to_string(got.size() - 1) + " rows, want " +
                                                     std::to_string(want.rows.size()));
    for (std::size_t r = 0; r + 1 < got.size() && r < want.rows.size(); ++r) {
        const auto &line = got[r + 1];
        c.expect(row_key(line[0]) == row_key(want.rows[r]), name + ": row '" + line[0] + "' vs '" + want.rows[r] + "'");
        c.expect(line.size() == want.header.size(), name + ": ragged row " + line[0]);
        for (std::size_t k = 1; k < line.size(); ++k) {
            if (want.decimals[r] < 0)
                c.expect(line[k].empty(), name + ": section heading with values");
            else
                c.expect(decimals_of(line[k]) == want.decimals[r], name + ": cell '" + line[k] + "' in row " + line[0]);
        }
    }
}

Check criterion10() {
    Check c;
    auto j = example_json();
    j["population"]["synthetic"]["persons"] = 20000;
    j["designs"] = {"ECRS", "trTWSS", "opTWSS_May", "EWSS_Sep", "EWSS_Oct"};
    j.erase("output_dir");
    const auto five = compute_scenario(parse_config(j, data_dir() / "examples"));
    j["designs"] = {"ECRS", "trTWSS", "opTWSS_May", "opTWSS_Jul", "EWSS_Sep", "EWSS_Oct"};
    const auto six = compute_scenario(parse_config(j, data_dir() / "examples"));

    const std::vector<std::string> cols5 = {"ECRS", "tr. TWSS", "op. TWSS (May)", "EWSS (Sep)", "EWSS (Oct)"};
    const std::vector<std::string> cols6 = {"ECRS",       "tr. TWSS",   "op. TWSS (May)",
                                            "op. TWSS (July)", "EWSS (Sep)", "EWSS (Oct)"};
    const auto with_corner = [](std::string corner, std::vector<std::string> cols) {
        cols.insert(cols.begin(), std::move(corner));
        return cols;
    };

    Layout t2{with_corner("Decile", cols5), {"Bottom", "3rd", "Median", "7th", "Top", "Average"}, {1, 1, 1, 1, 1, 1}};
    const std::vector<std::string> gini_rows = {
        "(1) Gini in Market income (excl. CWS)",
        "(2) Gini in Gross income ((1) + benefits, incl. CWS & PUP)",
        "(3) Gini in Adjusted disposable income ((2) – taxes – work related costs)",
        "(4) Gini in Adjusted disposable income without CWS ((3) – CWS)",
        "(5) Benefit redistribution (RS) ((4) – (3))",
        "(6) Benefit Regressivity (K)"};
    Layout t4{with_corner("Gini", cols5), gini_rows, {1, 1, 1, 1, 1, 2}};
    Layout t7{with_corner("RR_relative (rRR)", cols6), {}, {}};
    Layout t8{with_corner("Gini", cols6), {}, {}};
    const std::vector<std::string> waves = {"1st wave", "2nd wave", "3rd wave"};
    for (const auto &w : waves) {
        t7.rows.insert(t7.rows.end(), {w, "rRR > 1", "rRR > 0.7"});
        t7.decimals.insert(t7.decimals.end(), {-1, 1, 1});
    }
    for (std::size_t r = 0; r < gini_rows.size(); ++r) {
        t8.rows.push_back(gini_rows[r]);
        t8.decimals.push_back(-1);
        for (const auto &w : waves) {
            t8.rows.push_back(w);
            t8.decimals.push_back(r == 5 ? 2 : 1);
        }
    }
    compare_layout(c, "table 2", five.files.at("table2_may2020.csv"), t2);
    compare_layout(c, "table 4", five.files.at("table4_may2020.csv"), t4);
    compare_layout(c, "table 7", six.files.at("table7.csv"), t7);
    compare_layout(c, "table 8", six.files.at("table8.csv"), t8);
    return c;
}

struct Criterion {
    int number;
    const char *title;
    std::function<Check(double &)> run;
    double time_limit = 0.0; // seconds, 0 for none
};

} // namespace

int main() {
    double big_run = 0.0;
    const std::vector<Criterion> criteria = {
        {1, "schedule exactness", [](double &) { return criterion1(); }, 1.0},
        {2, "compensation-rate panel", [](double &) { return criterion2(); }, 1.0},
        {3, "Gini oracle and identities", [](double &) { return criterion3(); }},
        {4, "inequality panel identity", [](double &) { return criterion4(); }},
        {5, "IPF margins and cross-entropy", [](double &) { return criterion5(); }},
        {6, "alignment exactness", [](double &) { return criterion6(); }},
        {7, "estimator recovery", [](double &) { return criterion7(); }},
        {8, "PUP increase monotonicity", [](double &) { return criterion8(); }},
        {9, "determinism and scale", [&](double &s) { return criterion9(s); }},
        {10, "table layouts", [](double &) { return criterion10(); }},
    };
    int failures = 0;
    for (const auto &cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = cr.run(big_run);
        } catch (const std::exception &e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.time_limit > 0.0) c.expect(secs < cr.time_limit, "took " + fmt(secs, 2) + " s");
        const bool ok = c.failed == 0;
        failures += !ok;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << cr.number << ": " << cr.title << " (" << c.total - c.failed
                  << "/" << c.total << " checks, " << fmt(secs, 2) << " s";
        if (cr.number == 9) std::cout << ", 1M persons " << fmt(big_run, 1) << " s";
        std::cout << ")\n";
        for (const auto &m : c.messages) std::cout << "    " << m << '\n';
    }
    return failures == 0 ? 0 : 1;
}
