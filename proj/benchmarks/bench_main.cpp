#include <benchmark/benchmark.h>

#include <array>
#include <utility>
#include <vector>

#include "copkit/copkit.hpp"

using namespace copkit;

static void BM_CopulaEval(benchmark::State& state)
{
    const Copula c = Copula::gumbelBev(1.5);
    RandomStream rng(1);
    std::vector<std::pair<double, double>> pts(1024);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
    std::size_t i = 0;
    for (auto _ : state)
    {
        const auto& [u, v] = pts[i++ & 1023];
        benchmark::DoNotOptimize(c(u, v));
    }
}
BENCHMARK(BM_CopulaEval);

static void BM_KendallTauSample(benchmark::State& state)
{
    RandomStream rng(2);
    std::vector<std::pair<double, double>> pairs(state.range(0));
    for (auto& p : pairs)
    {
        const auto s = Copula::gumbelBev(1.0).sample2(rng);
        p = {s[0], s[1]};
    }
    for (auto _ : state) benchmark::DoNotOptimize(kendallTauSample(pairs));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTauSample)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);

static void BM_KendallTauCopula(benchmark::State& state)
{
    const Copula c = Copula::frechetMixture(0.4);
    for (auto _ : state)
    {
        RandomStream rng(3);
        benchmark::DoNotOptimize(kendallTauCopula(c, 100000, rng));
    }
}
BENCHMARK(BM_KendallTauCopula)->Unit(benchmark::kMillisecond);

static void BM_MaximalCoupling(benchmark::State& state)
{
    const std::array<Pmf, 2> pmfs{Pmf({0, 1, 2, 3}, {0.1, 0.2, 0.3, 0.4}), Pmf({1, 2, 3, 4}, {0.4, 0.3, 0.2, 0.1})};
    const auto sampler = maximalCoupling(pmfs);
    RandomStream rng(4);
    for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng, 1000));
}
BENCHMARK(BM_MaximalCoupling);

static void BM_VineDensityGrid(benchmark::State& state)
{
    const auto c = Copula::gumbelBev(1.0);
    const Vine3 v{{Margin::uniform(0, 1), Margin::uniform(0, 1), Margin::uniform(0, 1)},
                  numericDensity(c), numericDensity(c), numericDensity(c)};
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) axis[i] = (i + 0.5) / n;
    for (auto _ : state) benchmark::DoNotOptimize(v.densityGrid(axis, axis, axis));
    state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_VineDensityGrid)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_RaceTest(benchmark::State& state)
{
    RandomStream gen(5);
    const auto data = makeNullDataset(Margin::lognormal(5.6, 0.3), 1000, gen);
    RaceTestConfig cfg;
    cfg.resamples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
    {
        RandomStream rng(6);
        benchmark::DoNotOptimize(testRaceInequality(data, cfg, rng));
    }
}
BENCHMARK(BM_RaceTest)->Arg(0)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
