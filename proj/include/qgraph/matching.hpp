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

#ifndef QGRAPH_MATCHING_HPP
#define QGRAPH_MATCHING_HPP

#include <span>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/kernels.hpp"
#include "qgraph/state.hpp"

namespace qgraph {

/// All perfect matchings, each with ascending edge indices, in lexicographic order.
/// Empty for an odd vertex count. Requires a valid graph.
std::vector<PerfectMatching> enumerate_perfect_matchings(const ColoredGraph &graph);

/// True when `pm` covers every vertex of `graph` exactly once using existing edges.
bool is_perfect_matching(const ColoredGraph &graph, const PerfectMatching &pm);

/// Product of member weights. Throws std::invalid_argument unless `pm` is a perfect matching of `graph`.
Amplitude matching_amplitude(const ColoredGraph &graph, const PerfectMatching &pm);

/// Ket produced by `pm`: the mode at each vertex of `sites`.
Ket matching_ket(const ColoredGraph &graph, const PerfectMatching &pm, std::span<const std::size_t> sites);

/// Unnormalized post-selected state over the non-ancilla vertices.
QuantumState compute_state(const ColoredGraph &graph);

/// Unnormalized state with kets read off `sites` only; every other vertex is coverage-only.
QuantumState compute_state_on(const ColoredGraph &graph, std::span<const std::size_t> sites);

/// An alternating cycle of the symmetric difference of two matchings.
/// vertices[i] and vertices[i + 1] (cyclically) are joined by edges[i].
struct Cycle {
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> edges;

    std::size_t length() const { return edges.size(); }
    bool operator==(const Cycle &) const = default;
};

/// Disjoint even cycles formed by edges in exactly one of `a`, `b`; empty iff a == b.
/// Each cycle starts at its lowest vertex and leaves it along the edge from `a`.
std::vector<Cycle> symmetric_difference_cycles(const ColoredGraph &graph, const PerfectMatching &a,
                                               const PerfectMatching &b);

struct ContributingMatching {
    PerfectMatching matching;
    Amplitude amplitude;
};

struct InterferencePair {
    std::size_t first;   // index into CancellationReport::contributions
    std::size_t second;
    std::vector<Cycle> loops;
};

struct CancellationReport {
    Ket ket;
    std::vector<ContributingMatching> contributions;
    Amplitude net{};
    /// Pairs of contributions whose amplitudes point in opposing directions (Re(a conj b) < 0).
    std::vector<InterferencePair> opposing;

    bool cancelled() const;
};

/// Every matching contributing to `ket` (over the non-ancilla vertices), the net amplitude, and the
/// interference loops of each opposing pair.
CancellationReport find_cancellations(const ColoredGraph &graph, const Ket &ket);

/// As find_cancellations, with kets read off `sites`.
CancellationReport find_cancellations_on(const ColoredGraph &graph, const Ket &ket, std::span<const std::size_t> sites);

}  // namespace qgraph

#endif
