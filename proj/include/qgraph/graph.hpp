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

#ifndef QGRAPH_GRAPH_HPP
#define QGRAPH_GRAPH_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgraph {

using Amplitude = std::complex<double>;

/// Absolute tolerance used when comparing complex weights and amplitudes.
inline constexpr double kAmplitudeTolerance = 1e-12;

enum class VertexRole { detector, ancilla, input };

std::string_view role_name(VertexRole role);
std::optional<VertexRole> parse_role(std::string_view name);

struct Vertex {
    std::size_t id = 0;
    VertexRole role = VertexRole::detector;
    int dimension = 1;

    bool operator==(const Vertex &) const = default;
};

inline Vertex detector(std::size_t id, int dimension) { return {id, VertexRole::detector, dimension}; }
inline Vertex ancilla(std::size_t id, int dimension = 1) { return {id, VertexRole::ancilla, dimension}; }
inline Vertex input(std::size_t id, int dimension) { return {id, VertexRole::input, dimension}; }

/// A photon-pair source: endpoint u emits into mode cu, endpoint v into mode cv.
struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    int cu = 0;
    int cv = 0;
    Amplitude weight{1.0, 0.0};

    /// Swaps endpoints (with their modes) so that u <= v.
    Edge oriented() const;

    /// Mode of this edge at vertex `vertex`, which must be an endpoint.
    int mode_at(std::size_t vertex) const { return vertex == u ? cu : cv; }
    std::size_t other(std::size_t vertex) const { return vertex == u ? v : u; }

    bool same_slot(const Edge &o) const { return u == o.u && v == o.v && cu == o.cu && cv == o.cv; }
    bool operator==(const Edge &) const = default;
};

/// Lexicographic (u, v, cu, cv) order.
bool canonical_less(const Edge &a, const Edge &b);

/// Colored, complex-weighted multigraph describing one experiment.
///
/// Construction orients every edge (u <= v) and sorts the edge list into
/// canonical order, so edge indices are stable for a given edge set. The
/// value is never mutated afterwards; the `with_*`/`without_*` helpers
/// return modified copies. Invariant violations (bad ids, modes out of range,
/// duplicates, self-loops) are representable so that decoders can hand them
/// to validate_graph.
class ColoredGraph {
   public:
    ColoredGraph() = default;
    ColoredGraph(std::vector<Vertex> vertices, std::vector<Edge> edges, std::string name = {});

    const std::vector<Vertex> &vertices() const { return vertices_; }
    const std::vector<Edge> &edges() const { return edges_; }
    const std::string &name() const { return name_; }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const Vertex &vertex(std::size_t id) const { return vertices_.at(id); }
    const Edge &edge(std::size_t index) const { return edges_.at(index); }

    std::vector<Amplitude> weights() const;

    ColoredGraph with_weights(std::span<const Amplitude> weights) const;
    ColoredGraph with_real_weights(std::span<const double> weights) const;
    ColoredGraph without_edge(std::size_t index) const;
    ColoredGraph with_name(std::string name) const;

    /// Index of the edge occupying (u, v, cu, cv), if present.
    std::optional<std::size_t> find_edge(std::size_t u, std::size_t v, int cu, int cv) const;

    bool operator==(const ColoredGraph &) const = default;

   private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::string name_;
};

enum class ViolationKind {
    vertex_id,
    dimension,
    bad_endpoint,
    self_loop,
    mode_out_of_range,
    duplicate_edge,
    non_finite_weight,
};

std::string_view violation_name(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string message;
    std::optional<std::size_t> edge;
    std::optional<std::size_t> vertex;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
    std::string summary() const;
};

ValidationReport validate_graph(const ColoredGraph &graph);

/// Throws std::invalid_argument carrying the report summary unless the graph is valid.
void require_valid(const ColoredGraph &graph);

/// Ids of vertices whose mode appears in kets (non-ancilla, ascending id).
std::vector<std::size_t> ket_sites(const ColoredGraph &graph);

/// Ids of input-role vertices, ascending.
std::vector<std::size_t> input_sites(const ColoredGraph &graph);

}  // namespace qgraph

#endif
