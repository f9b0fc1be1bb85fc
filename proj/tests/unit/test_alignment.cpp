#include "wsim/alignment/align.hpp"
#include "wsim/alignment/ipf.hpp"
#include "wsim/core/error.hpp"
#include "wsim/core/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace wsim;
using namespace wsim::align;

namespace {

std::vector<std::int64_t> iota_ids(std::size_t n) {
    std::vector<std::int64_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

std::size_t count(const std::vector<std::uint8_t> &flags) {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
}

} // namespace

TEST(AlignBinary, SelectsExactlyK) {
    const std::size_t n = 500;
    std::vector<double> p(n), u(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = rng::uniform_open(1, i, 1);
        u[i] = rng::uniform_open(1, i, 2);
    }
    const auto ids = iota_ids(n);
    for (std::size_t k : {0u, 1u, 137u, 499u, 500u}) EXPECT_EQ(count(align_binary(p, u, ids, k)), k);
    EXPECT_THROW(align_binary(p, u, ids, n + 1), InfeasibleError);
}

TEST(AlignBinary, HigherProbabilityWinsAtEqualDraws) {
    const std::vector<double> p{0.9, 0.5, 0.1}, u{0.5, 0.5, 0.5};
    EXPECT_EQ(align_binary(p, u, iota_ids(3), 1), (std::vector<std::uint8_t>{1, 0, 0}));
}

TEST(AlignBinary, TiesGoToLowerId) {
    const std::vector<double> stat{1.0, 1.0, 1.0};
    const std::vector<std::int64_t> ids{7, 3, 5};
    EXPECT_EQ(select_top_k(stat, ids, 1), (std::vector<std::uint8_t>{0, 1, 0}));
}

TEST(AlignBinary, InvariantUnderMonotoneTransform) {
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const std::size_t n = 50 + rep;
        std::vector<double> s(n), t(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = rng::standard_normal(rep, i, 3);
            t[i] = std::exp(3.0 * s[i]) + 2.0;
        }
        const auto k = static_cast<std::size_t>(rng::uniform(rep, 0, 4) * static_cast<double>(n + 1));
        const auto ids = iota_ids(n);
        EXPECT_EQ(select_top_k(s, ids, k), select_top_k(t, ids, k));
    }
}

TEST(AlignBinary, ExpectedCountKeepsShareCloseToMonteCarlo) {
    const std::size_t n = 5000;
    std::vector<double> p(n, 0.3), u(n);
    std::size_t unaligned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = rng::uniform_open(2, i, 1);
        unaligned += u[i] < p[i];
    }
    const auto flags = align_binary(p, u, iota_ids(n), unaligned);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(flags[i], u[i] < p[i] ? 1 : 0);
}

TEST(AlignMultinomial, HitsTargetsExactly) {
    const std::size_t n = 300;
    const int k = 4;
    std::vector<double> scores(n * k);
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = rng::standard_normal(5, i, 1);
    const std::vector<std::size_t> targets{10, 200, 0, 90};
    const auto out = align_multinomial(scores, k, iota_ids(n), targets);
    std::vector<std::size_t> got(k, 0);
    for (int o : out) ++got[static_cast<std::size_t>(o)];
    EXPECT_EQ(got, targets);
    const std::vector<std::size_t> bad{10, 10, 10, 10};
    EXPECT_THROW(align_multinomial(scores, k, iota_ids(n), bad), InfeasibleError);
}

TEST(AlignMultinomial, OneOutcomeTakesEveryone) {
    std::vector<double> scores(30);
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = rng::standard_normal(6, i, 1);
    const std::vector<std::size_t> targets{0, 10, 0};
    const auto out = align_multinomial(scores, 3, iota_ids(10), targets);
    for (int o : out) EXPECT_EQ(o, 1);
}

TEST(AlignMultinomial, FixedPointAtUnalignedCounts) {
    for (std::uint64_t rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rep % 8;
        const int k = 2 + static_cast<int>(rep % 3);
        std::vector<double> scores(n * static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = rng::standard_normal(rep, i, 7);
        const auto argmax = argmax_rows(scores, k);
        std::vector<std::size_t> targets(static_cast<std::size_t>(k), 0);
        for (int o : argmax) ++targets[static_cast<std::size_t>(o)];
        EXPECT_EQ(align_multinomial(scores, k, iota_ids(n), targets), argmax);
    }
}

TEST(AlignMultinomial, TwoOutcomesEquivalentToBinary) {
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        const std::size_t n = 40;
        std::vector<double> scores(n * 2), stat(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[2 * i] = rng::standard_normal(rep, i, 8);
            scores[2 * i + 1] = rng::standard_normal(rep, i, 9);
            stat[i] = scores[2 * i + 1] - scores[2 * i];
        }
        const std::size_t k1 = rep % (n + 1);
        const std::vector<std::size_t> targets{n - k1, k1};
        const auto multi = align_multinomial(scores, 2, iota_ids(n), targets);
        const auto bin = select_top_k(stat, iota_ids(n), k1);
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(multi[i], bin[i]);
    }
}

TEST(AlignContinuous, ScalesToTarget) {
    const std::vector<double> v{10.0, 30.0};
    EXPECT_EQ(align_continuous(v, 80.0), (std::vector<double>{20.0, 60.0}));
    EXPECT_EQ(align_continuous(v, 40.0), v);
    const std::vector<double> zeros{0.0, 0.0};
    EXPECT_THROW(align_continuous(zeros, 100.0), InfeasibleError);
    std::vector<double> r(1000);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rng::uniform(3, i, 1) * 100.0;
    const auto scaled = align_continuous(r, 12345.678);
    EXPECT_NEAR(std::accumulate(scaled.begin(), scaled.end(), 0.0), 12345.678, 1e-9 * 12345.678);
    const auto mean = align_continuous_mean(r, 42.0);
    EXPECT_NEAR(std::accumulate(mean.begin(), mean.end(), 0.0) / 1000.0, 42.0, 1e-9 * 42.0);
}

TEST(Apportion, SumsExactlyAndFollowsWeights) {
    const std::vector<double> w{0.5, 0.3, 0.2};
    EXPECT_EQ(apportion(w, 10), (std::vector<std::size_t>{5, 3, 2}));
    const std::vector<double> even{1.0, 1.0, 1.0};
    EXPECT_EQ(apportion(even, 4), (std::vector<std::size_t>{2, 1, 1}));
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        std::vector<double> r(7);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = rng::uniform(rep, i, 2);
        const auto out = apportion(r, 1000 + rep);
        EXPECT_EQ(std::accumulate(out.begin(), out.end(), std::size_t{0}), 1000 + rep);
    }
    const std::vector<double> zero{0.0, 0.0};
    EXPECT_THROW(apportion(zero, 3), InfeasibleError);
    EXPECT_EQ(apportion(zero, 0), (std::vector<std::size_t>{0, 0}));
    const std::vector<double> neg{1.0, -1.0};
    EXPECT_THROW(apportion(neg, 3), InfeasibleError);
}

TEST(Ipf, TwoByTwoExample) {
    IpfProblem p{Eigen::MatrixXd::Ones(2, 2), Eigen::Vector2d(1, 3), Eigen::Vector2d(2, 2)};
    const auto r = ipf(p);
    EXPECT_NEAR(r.fitted(0, 0), 0.5, 1e-12);
    EXPECT_NEAR(r.fitted(0, 1), 0.5, 1e-12);
    EXPECT_NEAR(r.fitted(1, 0), 1.5, 1e-12);
    EXPECT_NEAR(r.fitted(1, 1), 1.5, 1e-12);
}

TEST(Ipf, SeedAlreadyFittingIsFixedPoint) {
    Eigen::MatrixXd seed(2, 3);
    seed << 1, 2, 3, 4, 5, 6;
    IpfProblem p{seed, seed.rowwise().sum(), seed.colwise().sum().transpose()};
    const auto r = ipf(p);
    EXPECT_LE(r.iterations, 1);
    EXPECT_TRUE(r.fitted.isApprox(seed, 1e-14));
}

TEST(Ipf, InfeasibleMarginsRejected) {
    IpfProblem p{Eigen::MatrixXd::Ones(2, 2), Eigen::Vector2d(1, 3), Eigen::Vector2d(2, 3)};
    EXPECT_THROW(ipf(p), InfeasibleError);
    Eigen::MatrixXd seed = Eigen::MatrixXd::Ones(2, 2);
    seed.row(0).setZero();
    IpfProblem z{seed, Eigen::Vector2d(1, 3), Eigen::Vector2d(2, 2)};
    EXPECT_THROW(ipf(z), InfeasibleError);
}

TEST(Ipf, PreservesZerosAndOddsRatios) {
    for (std::uint64_t rep = 0; rep < 30; ++rep) {
        Eigen::MatrixXd seed(3, 4);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) seed(i, j) = 0.1 + rng::uniform(rep, static_cast<std::uint64_t>(i * 4 + j), 1);
        seed(1, 2) = 0.0;
        Eigen::MatrixXd truth = seed;
        for (int i = 0; i < 3; ++i) truth.row(i) *= 1.0 + 3.0 * rng::uniform(rep, static_cast<std::uint64_t>(i), 2);
        for (int j = 0; j < 4; ++j) truth.col(j) *= 1.0 + 3.0 * rng::uniform(rep, static_cast<std::uint64_t>(j), 3);
        IpfProblem p{seed, truth.rowwise().sum(), truth.colwise().sum().transpose()};
        const auto r = ipf(p);
        EXPECT_LT(r.residual, kIpfTolerance);
        EXPECT_EQ(r.fitted(1, 2), 0.0);
        const double seed_or = seed(0, 0) * seed(2, 3) / (seed(0, 3) * seed(2, 0));
        const double fit_or = r.fitted(0, 0) * r.fitted(2, 3) / (r.fitted(0, 3) * r.fitted(2, 0));
        EXPECT_NEAR(fit_or, seed_or, 1e-6 * seed_or);
    }
}

TEST(Ipf, IterationCapRaisesConvergenceError) {
    Eigen::MatrixXd seed(2, 2);
    seed << 1, 1e-6, 1e-6, 1;
    IpfProblem p{seed, Eigen::Vector2d(1, 1), Eigen::Vector2d(1.5, 0.5)};
    try {
        ipf(p, 1e-14, 2);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError &e) {
        EXPECT_GT(e.last_residual(), 0.0);
    }
}
