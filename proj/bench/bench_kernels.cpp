// Copyright 2026 The qgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts on identical inputs.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "qgraph/kernels.hpp"
#include "qgraph/targets.hpp"

namespace {

using namespace qgraph;

ColoredGraph dense(std::size_t n, int d) {
    std::mt19937_64 rng(n * 31 + static_cast<std::uint64_t>(d));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(detector(i, d));
    std::vector<Edge> es;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y) es.push_back(Edge{a, b, x, y, {u(rng), 0.0}});
    return ColoredGraph(vs, es);
}

struct Fixture {
    ColoredGraph graph;
    kernels::CompiledGraph compiled;
    std::vector<Amplitude> target;
    std::vector<Amplitude> weights;

    explicit Fixture(std::size_t n) : graph(dense(n, 2)) {
        auto sites = ket_sites(graph);
        compiled = kernels::compile(graph, sites);
        target = kernels::align_target(compiled, ghz_state(static_cast<int>(n), 2).state);
        weights = graph.weights();
    }
};

const Fixture &fixture(std::size_t n) {
    static std::map<std::size_t, Fixture> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
    return it->second;
}

template <auto Enumerate>
void BM_Enumerate(benchmark::State &state) {
    auto g = dense(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(Enumerate(g));
}

template <auto Amplitudes>
void BM_Amplitudes(benchmark::State &state) {
    const auto &f = fixture(static_cast<std::size_t>(state.range(0)));
    std::vector<Amplitude> out(f.compiled.num_kets());
    for (auto _ : state) {
        Amplitudes(f.compiled, f.weights, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["matchings"] = static_cast<double>(f.compiled.num_matchings());
}

template <auto LossGradient>
void BM_LossGradient(benchmark::State &state) {
    const auto &f = fixture(static_cast<std::size_t>(state.range(0)));
    std::vector<Amplitude> grad(f.weights.size());
    for (auto _ : state) benchmark::DoNotOptimize(LossGradient(f.compiled, f.target, f.weights, grad));
}

template <auto Stress>
void BM_Stress(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point3> p(n);
    for (auto &x : p) x = {u(rng), u(rng), u(rng)};
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = i == j ? 0.0 : 1.0 + static_cast<double>((i + j) % 7);
    for (auto _ : state) benchmark::DoNotOptimize(Stress(p, d));
}

}  // namespace

BENCHMARK(BM_Enumerate<kernels::serial::enumerate_perfect_matchings>)->Name("enumerate/serial")->Arg(8)->Arg(10);
BENCHMARK(BM_Enumerate<kernels::parallel::enumerate_perfect_matchings>)->Name("enumerate/parallel")->Arg(8)->Arg(10);
BENCHMARK(BM_Amplitudes<kernels::serial::amplitudes>)->Name("amplitudes/serial")->Arg(8)->Arg(10);
BENCHMARK(BM_Amplitudes<kernels::parallel::amplitudes>)->Name("amplitudes/parallel")->Arg(8)->Arg(10);
BENCHMARK(BM_LossGradient<kernels::serial::loss_gradient>)->Name("loss_gradient/serial")->Arg(8)->Arg(10);
BENCHMARK(BM_LossGradient<kernels::parallel::loss_gradient>)->Name("loss_gradient/parallel")->Arg(8)->Arg(10);
BENCHMARK(BM_Stress<kernels::serial::stress>)->Name("stress/serial")->Arg(200)->Arg(2000);
BENCHMARK(BM_Stress<kernels::parallel::stress>)->Name("stress/parallel")->Arg(200)->Arg(2000);

BENCHMARK_MAIN();
