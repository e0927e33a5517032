/*
 * Copyright 2026 The specmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <vector>

#include "specmc/chain.hpp"
#include "specmc/kernel.hpp"
#include "specmc/rng.hpp"
#include "specmc/spectral.hpp"
#include "specmc/ustat.hpp"

namespace
{
using namespace specmc;

std::vector<double> refresh_path(std::size_t n)
{
    const auto trace = simulate(refresh_chain(), n, Start::at(0.5), 7);
    return {trace.states().begin(), trace.states().end()};
}

void BM_EigSym(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Philox rng(1);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(eig_sym(a));
}
BENCHMARK(BM_EigSym)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Delta2(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    Philox rng(2);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        a[i] = rng.uniform(-1.0, 1.0);
        b[i] = rng.uniform(-1.0, 1.0);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(delta2(a, b));
}
BENCHMARK(BM_Delta2)->Arg(1024)->Arg(65536);

void BM_Simulate(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto chain = refresh_chain();
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(chain, n, Start::at(0.5), ++seed));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1 << 12)->Arg(1 << 16);

void BM_GramSpectrum(benchmark::State& state)
{
    const auto states = refresh_path(static_cast<std::size_t>(state.range(0)));
    const auto kernel = cosine_kernel({1.0, 0.5, 0.25});
    const auto route = static_cast<SpectrumRoute>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(gram_spectrum(states, kernel, GramVariant::zero_diagonal, route));
    state.SetLabel(to_string(route));
}
BENCHMARK(BM_GramSpectrum)
    ->Args({512, static_cast<int>(SpectrumRoute::dense)})
    ->Args({512, static_cast<int>(SpectrumRoute::compressed)})
    ->Unit(benchmark::kMillisecond);

void BM_UStat(benchmark::State& state)
{
    const auto states = refresh_path(static_cast<std::size_t>(state.range(0)));
    const auto kernel = polynomial_kernel(0.0, 1);
    const auto route = static_cast<UStatRoute>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(u_stat(states, kernel, route));
    state.SetLabel(to_string(route));
}
BENCHMARK(BM_UStat)
    ->Args({4096, static_cast<int>(UStatRoute::direct)})
    ->Args({4096, static_cast<int>(UStatRoute::factored)})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
