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

// Hot loops of the engine. Every kernel exists twice: `serial::` is the
// straightforward reference kept for testing, `parallel::` is the OpenMP
// version used by the public API. Both visit terms in the same order per
// output slot, so their results are bit-identical for any thread count.

#ifndef QGRAPH_KERNELS_HPP
#define QGRAPH_KERNELS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/state.hpp"

namespace qgraph {

/// Edge indices (ascending) of a subset covering every vertex exactly once.
struct PerfectMatching {
    std::vector<std::size_t> edges;

    bool operator==(const PerfectMatching &) const = default;
    auto operator<=>(const PerfectMatching &) const = default;
};

using Point3 = std::array<double, 3>;

namespace kernels {

/// Below this many work items the OpenMP kernels run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 4096;

/// The perfect matchings of a graph, grouped by the ket they produce, in a
/// flat layout that can be re-evaluated for any weight vector.
struct CompiledGraph {
    std::size_t num_edges = 0;
    std::size_t matching_size = 0;
    std::vector<int> site_dims;
    /// Distinct kets produced by at least one matching, ascending.
    std::vector<Ket> kets;
    /// Matchings of kets[k] are rows [ket_offsets[k], ket_offsets[k + 1]).
    std::vector<std::size_t> ket_offsets;
    /// Row-major, matching_size edge indices per matching.
    std::vector<std::uint32_t> members;
    std::vector<std::uint32_t> matching_ket;
    /// CSR incidence: matchings containing edge e are edge_matchings[edge_offsets[e] .. edge_offsets[e + 1]).
    std::vector<std::size_t> edge_offsets;
    std::vector<std::uint32_t> edge_matchings;

    std::size_t num_matchings() const { return matching_ket.size(); }
    std::size_t num_kets() const { return kets.size(); }
    std::span<const std::uint32_t> matching(std::size_t m) const {
        return {members.data() + m * matching_size, matching_size};
    }
};

/// Compiles `graph` (must be valid) reading kets off the vertices in `sites`.
/// Throws std::invalid_argument if an ancilla is covered at a mode outside its dimension.
CompiledGraph compile(const ColoredGraph &graph, std::span<const std::size_t> sites);

/// Target amplitudes aligned to `compiled.kets`; kets the graph cannot produce are dropped.
std::vector<Amplitude> align_target(const CompiledGraph &compiled, const QuantumState &target);

namespace serial {

std::vector<PerfectMatching> enumerate_perfect_matchings(const ColoredGraph &graph);

/// out[k] = sum over matchings of ket k of the product of member weights.
void amplitudes(const CompiledGraph &compiled, std::span<const Amplitude> weights, std::span<Amplitude> out);

/// Returns 1 - |<t|psi>|^2 / <psi|psi> for a normalized target and writes
/// dLoss/dRe(w_e) + i dLoss/dIm(w_e) into `gradient` (zeros when psi vanishes).
double loss_gradient(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights,
                     std::span<Amplitude> gradient);

double loss(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights);

/// Kamada-Kawai stress with unit length and k_ij = 1 / d_ij^2; `distances` is row-major n x n.
double stress(std::span<const Point3> positions, std::span<const double> distances);

}  // namespace serial

namespace parallel {

std::vector<PerfectMatching> enumerate_perfect_matchings(const ColoredGraph &graph);
void amplitudes(const CompiledGraph &compiled, std::span<const Amplitude> weights, std::span<Amplitude> out);
double loss_gradient(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights,
                     std::span<Amplitude> gradient);
double loss(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights);
double stress(std::span<const Point3> positions, std::span<const double> distances);

}  // namespace parallel

}  // namespace kernels
}  // namespace qgraph

#endif
