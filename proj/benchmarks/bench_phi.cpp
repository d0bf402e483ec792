#include "mlc/amenability.hpp"
#include "mlc/group.hpp"

#include <benchmark/benchmark.h>

namespace {

mlc::MetricGroup zmod(int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    std::vector<std::int32_t> mul(std::size_t(n) * std::size_t(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mul[std::size_t(i) * std::size_t(n) + std::size_t(j)] =
                static_cast<std::int32_t>((i + j) % n);
    return mlc::MetricGroup::make_finite(std::move(labels), std::move(mul), "0",
                                         mlc::MetricTable{}, mlc::Rat(1));
}

void BM_phi_value_fast(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const auto g = zmod(2 * k);
    std::vector<std::size_t> F;
    for (int i = 0; i < k; ++i) F.push_back(std::size_t(i));
    mlc::PhiSpec spec;
    spec.k = k;
    spec.q = mlc::Rat(1, 2);
    spec.theta = mlc::Rat(3, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(mlc::phi_value_fast(g, F, 1, spec));
}
BENCHMARK(BM_phi_value_fast)->Arg(4)->Arg(8)->Arg(16);

void BM_build_phi_ast(benchmark::State& state) {
    mlc::PhiSpec spec;
    spec.k = static_cast<int>(state.range(0));
    spec.q = mlc::Rat(1, 2);
    spec.theta = mlc::Rat(1, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(mlc::build_phi(spec));
}
BENCHMARK(BM_build_phi_ast)->Arg(2)->Arg(3)->Arg(4);

} // namespace
