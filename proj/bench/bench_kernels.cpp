#include "wsim/igm/covariates.hpp"
#include "wsim/igm/simulate.hpp"
#include "wsim/indicators/inequality.hpp"
#include "wsim/policy/household_eval.hpp"
#include "wsim/policy/schedule_io.hpp"
#include "wsim/population/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <map>
#include <vector>

namespace {

using namespace wsim;

const PopulationSnapshot &population(std::size_t n) {
    static std::map<std::size_t, PopulationSnapshot> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, generate_synthetic(SyntheticSpec{}, n, 7)).first;
    return it->second;
}

igm::BinaryModelParams presence_model() {
    igm::BinaryModelParams m;
    m.covariates = {"intercept", "gender", "education"};
    m.names = igm::CovariateSet::parse(m.covariates).names();
    m.coef = Eigen::VectorXd(4);
    m.coef << 0.3, -0.4, 0.2, 0.5;
    return m;
}

igm::LevelModelParams level_model() {
    igm::LevelModelParams m;
    m.covariates = {"intercept", "gender", "education"};
    m.names = igm::CovariateSet::parse(m.covariates).names();
    m.coef = Eigen::VectorXd(4);
    m.coef << 6.3, -0.1, 0.0, 0.2;
    m.residual_sd = 0.7;
    return m;
}

void BM_PresenceParallel(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    const auto m = presence_model();
    for (auto _ : state) benchmark::DoNotOptimize(igm::simulate_presence(m, pop.persons(), 1, rng::Stream::in_work));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PresenceSerial(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    const auto m = presence_model();
    for (auto _ : state)
        benchmark::DoNotOptimize(igm::reference::simulate_presence(m, pop.persons(), 1, rng::Stream::in_work));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LevelParallel(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    const auto m = level_model();
    const igm::ResidualStore store("earnings", m.residual_sd, 1, rng::Stream::earnings_level);
    const std::vector<std::uint8_t> present(pop.size(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(igm::simulate_level(m, store, pop.persons(), present));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LevelSerial(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    const auto m = level_model();
    const igm::ResidualStore store("earnings", m.residual_sd, 1, rng::Stream::earnings_level);
    const std::vector<std::uint8_t> present(pop.size(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(igm::reference::simulate_level(m, store, pop.persons(), present));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct PolicyFixture {
    policy::PresetRegistry presets{policy::default_preset_dir()};
    policy::TaxBenefitParams params;
    policy::PolicyContext ctx;
    PolicyFixture() {
        ctx.cws = &presets.cws("EWSS_Oct");
        ctx.pup = &presets.pup("PUP_16Oct");
        ctx.params = &params;
    }
};

void BM_EvaluateParallel(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    const PolicyFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(policy::evaluate_population(pop, f.ctx));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateSerial(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    const PolicyFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(policy::reference::evaluate_population(pop, f.ctx));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GiniSorted(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    std::vector<double> v;
    for (const auto &p : pop.persons()) v.push_back(p.gross_earnings);
    for (auto _ : state) benchmark::DoNotOptimize(ind::gini(v));
}

void BM_GiniPairwise(benchmark::State &state) {
    const auto &pop = population(static_cast<std::size_t>(state.range(0)));
    std::vector<double> v;
    for (const auto &p : pop.persons()) v.push_back(p.gross_earnings);
    for (auto _ : state) benchmark::DoNotOptimize(ind::reference::gini_pairwise(v));
}

} // namespace

BENCHMARK(BM_PresenceSerial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PresenceParallel)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LevelSerial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LevelParallel)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GiniSorted)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GiniPairwise)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
