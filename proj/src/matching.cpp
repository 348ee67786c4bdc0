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

#include "qgraph/matching.hpp"

#include <algorithm>
#include <stdexcept>

namespace qgraph {

namespace {

/// A sum is treated as cancelled when it is this small relative to its terms.
bool negligible(Amplitude sum, double magnitude) {
    return sum == Amplitude{} || std::abs(sum) <= kAmplitudeTolerance * magnitude;
}

}  // namespace

std::vector<PerfectMatching> enumerate_perfect_matchings(const ColoredGraph &graph) {
    require_valid(graph);
    return kernels::parallel::enumerate_perfect_matchings(graph);
}

bool is_perfect_matching(const ColoredGraph &graph, const PerfectMatching &pm) {
    std::vector<char> seen(graph.num_vertices(), 0);
    for (auto idx : pm.edges) {
        if (idx >= graph.num_edges()) return false;
        const Edge &e = graph.edge(idx);
        if (e.u >= seen.size() || e.v >= seen.size() || e.u == e.v) return false;
        if (seen[e.u] || seen[e.v]) return false;
        seen[e.u] = seen[e.v] = 1;
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

Amplitude matching_amplitude(const ColoredGraph &graph, const PerfectMatching &pm) {
    if (!is_perfect_matching(graph, pm)) {
        throw std::invalid_argument("matching_amplitude: edge set does not cover every vertex exactly once");
    }
    Amplitude product{1.0, 0.0};
    for (auto idx : pm.edges) product *= graph.edge(idx).weight;
    return product;
}

Ket matching_ket(const ColoredGraph &graph, const PerfectMatching &pm, std::span<const std::size_t> sites) {
    std::vector<int> mode(graph.num_vertices(), 0);
    for (auto idx : pm.edges) {
        const Edge &e = graph.edge(idx);
        mode[e.u] = e.cu;
        mode[e.v] = e.cv;
    }
    Ket ket(sites.size());
    for (std::size_t s = 0; s < sites.size(); ++s) ket[s] = mode[sites[s]];
    return ket;
}

QuantumState compute_state_on(const ColoredGraph &graph, std::span<const std::size_t> sites) {
    require_valid(graph);
    auto compiled = kernels::compile(graph, sites);
    auto weights = graph.weights();
    std::vector<Amplitude> amps(compiled.num_kets());
    kernels::parallel::amplitudes(compiled, weights, amps);

    QuantumState state(compiled.site_dims);
    for (std::size_t k = 0; k < compiled.num_kets(); ++k) {
        double magnitude = 0.0;
        for (std::size_t m = compiled.ket_offsets[k]; m < compiled.ket_offsets[k + 1]; ++m) {
            double term = 1.0;
            for (auto e : compiled.matching(m)) term *= std::abs(weights[e]);
            magnitude += term;
        }
        if (!negligible(amps[k], magnitude)) state.amplitudes.emplace(compiled.kets[k], amps[k]);
    }
    return state;
}

QuantumState compute_state(const ColoredGraph &graph) {
    auto sites = ket_sites(graph);
    return compute_state_on(graph, sites);
}

std::vector<Cycle> symmetric_difference_cycles(const ColoredGraph &graph, const PerfectMatching &a,
                                               const PerfectMatching &b) {
    std::size_t n = graph.num_vertices();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    // In a perfect matching each vertex has exactly one partner edge.
    std::vector<std::size_t> via_a(n, none), via_b(n, none);
    for (auto idx : a.edges) {
        const Edge &e = graph.edge(idx);
        via_a[e.u] = via_a[e.v] = idx;
    }
    for (auto idx : b.edges) {
        const Edge &e = graph.edge(idx);
        via_b[e.u] = via_b[e.v] = idx;
    }

    std::vector<Cycle> cycles;
    std::vector<char> visited(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        if (visited[start] || via_a[start] == via_b[start] || via_a[start] == none || via_b[start] == none) continue;
        Cycle cycle;
        std::size_t at = start;
        bool use_a = true;
        do {
            visited[at] = 1;
            std::size_t idx = use_a ? via_a[at] : via_b[at];
            cycle.vertices.push_back(at);
            cycle.edges.push_back(idx);
            at = graph.edge(idx).other(at);
            use_a = !use_a;
        } while (at != start);
        cycles.push_back(std::move(cycle));
    }
    return cycles;
}

bool CancellationReport::cancelled() const {
    double magnitude = 0.0;
    for (const auto &c : contributions) magnitude += std::abs(c.amplitude);
    return negligible(net, magnitude);
}

CancellationReport find_cancellations_on(const ColoredGraph &graph, const Ket &ket, std::span<const std::size_t> sites) {
    require_valid(graph);
    CancellationReport report;
    report.ket = ket;
    for (const auto &pm : kernels::parallel::enumerate_perfect_matchings(graph)) {
        if (matching_ket(graph, pm, sites) != ket) continue;
        Amplitude amp = matching_amplitude(graph, pm);
        report.net += amp;
        report.contributions.push_back({pm, amp});
    }
    const auto &cs = report.contributions;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            if ((cs[i].amplitude * std::conj(cs[j].amplitude)).real() < 0.0) {
                report.opposing.push_back({i, j, symmetric_difference_cycles(graph, cs[i].matching, cs[j].matching)});
            }
        }
    }
    if (report.cancelled()) report.net = Amplitude{};
    return report;
}

CancellationReport find_cancellations(const ColoredGraph &graph, const Ket &ket) {
    auto sites = ket_sites(graph);
    return find_cancellations_on(graph, ket, sites);
}

}  // namespace qgraph
