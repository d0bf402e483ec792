#include "mlc/matching.hpp"
#include "mlc/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

mlc::BipartiteInstance random_instance(std::size_t n, double p, std::uint64_t seed) {
    auto g = mlc::BipartiteInstance::make(n, n);
    mlc::Rng rng(seed);
    const auto cut = static_cast<std::uint64_t>(p * 1024.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rng.below(1024) < cut) g.set_edge(i, j);
    return g;
}

void BM_mu_deficiency(benchmark::State& state) {
    const auto g = random_instance(std::size_t(state.range(0)), 0.3, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(mlc::matching_mu(g, mlc::MuMethod::Deficiency, 1));
}
BENCHMARK(BM_mu_deficiency)->Arg(8)->Arg(12)->Arg(16);

void BM_mu_augmenting(benchmark::State& state) {
    const auto g = random_instance(std::size_t(state.range(0)), 0.3, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(mlc::matching_mu(g, mlc::MuMethod::Augmenting, 1));
}
BENCHMARK(BM_mu_augmenting)->Arg(8)->Arg(16)->Arg(64)->Arg(256);

} // namespace
