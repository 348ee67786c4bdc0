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

#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace qgraph {

std::string_view role_name(VertexRole role) {
    switch (role) {
        case VertexRole::detector:
            return "detector";
        case VertexRole::ancilla:
            return "ancilla";
        case VertexRole::input:
            return "input";
    }
    return "detector";
}

std::optional<VertexRole> parse_role(std::string_view name) {
    if (name == "detector") return VertexRole::detector;
    if (name == "ancilla") return VertexRole::ancilla;
    if (name == "input") return VertexRole::input;
    return std::nullopt;
}

Edge Edge::oriented() const {
    if (u <= v) return *this;
    return Edge{v, u, cv, cu, weight};
}

bool canonical_less(const Edge &a, const Edge &b) {
    return std::tie(a.u, a.v, a.cu, a.cv) < std::tie(b.u, b.v, b.cu, b.cv);
}

ColoredGraph::ColoredGraph(std::vector<Vertex> vertices, std::vector<Edge> edges, std::string name)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), name_(std::move(name)) {
    for (auto &e : edges_) e = e.oriented();
    std::stable_sort(edges_.begin(), edges_.end(), canonical_less);
}

std::vector<Amplitude> ColoredGraph::weights() const {
    std::vector<Amplitude> out;
    out.reserve(edges_.size());
    for (const auto &e : edges_) out.push_back(e.weight);
    return out;
}

ColoredGraph ColoredGraph::with_weights(std::span<const Amplitude> weights) const {
    if (weights.size() != edges_.size()) {
        throw std::invalid_argument("with_weights: expected " + std::to_string(edges_.size()) + " weights, got " +
                                    std::to_string(weights.size()));
    }
    ColoredGraph out = *this;
    for (std::size_t i = 0; i < weights.size(); ++i) out.edges_[i].weight = weights[i];
    return out;
}

ColoredGraph ColoredGraph::with_real_weights(std::span<const double> weights) const {
    if (weights.size() != edges_.size()) {
        throw std::invalid_argument("with_real_weights: expected " + std::to_string(edges_.size()) +
                                    " weights, got " + std::to_string(weights.size()));
    }
    ColoredGraph out = *this;
    for (std::size_t i = 0; i < weights.size(); ++i) out.edges_[i].weight = Amplitude(weights[i], 0.0);
    return out;
}

ColoredGraph ColoredGraph::without_edge(std::size_t index) const {
    if (index >= edges_.size()) throw std::out_of_range("without_edge: edge index out of range");
    ColoredGraph out = *this;
    out.edges_.erase(out.edges_.begin() + static_cast<std::ptrdiff_t>(index));
    return out;
}

ColoredGraph ColoredGraph::with_name(std::string name) const {
    ColoredGraph out = *this;
    out.name_ = std::move(name);
    return out;
}

std::optional<std::size_t> ColoredGraph::find_edge(std::size_t u, std::size_t v, int cu, int cv) const {
    Edge probe = Edge{u, v, cu, cv, {}}.oriented();
    auto it = std::lower_bound(edges_.begin(), edges_.end(), probe, canonical_less);
    if (it != edges_.end() && it->same_slot(probe)) return static_cast<std::size_t>(it - edges_.begin());
    return std::nullopt;
}

std::string_view violation_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::vertex_id:
            return "vertex id";
        case ViolationKind::dimension:
            return "dimension";
        case ViolationKind::bad_endpoint:
            return "bad endpoint";
        case ViolationKind::self_loop:
            return "self-loop";
        case ViolationKind::mode_out_of_range:
            return "mode out of range";
        case ViolationKind::duplicate_edge:
            return "duplicate edge";
        case ViolationKind::non_finite_weight:
            return "non-finite weight";
    }
    return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation &v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i].message;
    }
    return out.str();
}

ValidationReport validate_graph(const ColoredGraph &graph) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::string msg, std::optional<std::size_t> edge,
                   std::optional<std::size_t> vertex) {
        report.violations.push_back({kind, std::string(violation_name(kind)) + ": " + msg, edge, vertex});
    };

    const auto &vs = graph.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].id != i) {
            add(ViolationKind::vertex_id,
                "vertex at position " + std::to_string(i) + " has id " + std::to_string(vs[i].id), std::nullopt, i);
        }
        if (vs[i].dimension < 1) {
            add(ViolationKind::dimension,
                "vertex " + std::to_string(i) + " has dimension " + std::to_string(vs[i].dimension), std::nullopt, i);
        }
    }

    const auto &es = graph.edges();
    for (std::size_t i = 0; i < es.size(); ++i) {
        const Edge &e = es[i];
        std::string where = "edge " + std::to_string(i) + " (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            "," + std::to_string(e.cu) + "," + std::to_string(e.cv) + ")";
        if (e.u >= vs.size() || e.v >= vs.size()) {
            add(ViolationKind::bad_endpoint, where + " references a missing vertex", i, std::nullopt);
            continue;
        }
        if (e.u == e.v) add(ViolationKind::self_loop, where + " joins a vertex to itself", i, e.u);
        if (e.cu < 0 || e.cu >= vs[e.u].dimension) {
            add(ViolationKind::mode_out_of_range,
                where + " uses mode " + std::to_string(e.cu) + " at vertex " + std::to_string(e.u) + " of dimension " +
                    std::to_string(vs[e.u].dimension),
                i, e.u);
        }
        if (e.cv < 0 || e.cv >= vs[e.v].dimension) {
            add(ViolationKind::mode_out_of_range,
                where + " uses mode " + std::to_string(e.cv) + " at vertex " + std::to_string(e.v) + " of dimension " +
                    std::to_string(vs[e.v].dimension),
                i, e.v);
        }
        if (!std::isfinite(e.weight.real()) || !std::isfinite(e.weight.imag())) {
            add(ViolationKind::non_finite_weight, where + " has a non-finite weight", i, std::nullopt);
        }
        // Edges are canonically sorted, so duplicates are adjacent.
        if (i > 0 && es[i - 1].same_slot(e)) {
            add(ViolationKind::duplicate_edge, where + " repeats edge " + std::to_string(i - 1), i, std::nullopt);
        }
    }
    return report;
}

void require_valid(const ColoredGraph &graph) {
    auto report = validate_graph(graph);
    if (!report.ok()) throw std::invalid_argument("invalid graph: " + report.summary());
}

std::vector<std::size_t> ket_sites(const ColoredGraph &graph) {
    std::vector<std::size_t> out;
    for (const auto &v : graph.vertices()) {
        if (v.role != VertexRole::ancilla) out.push_back(v.id);
    }
    return out;
}

std::vector<std::size_t> input_sites(const ColoredGraph &graph) {
    std::vector<std::size_t> out;
    for (const auto &v : graph.vertices()) {
        if (v.role == VertexRole::input) out.push_back(v.id);
    }
    return out;
}

}  // namespace qgraph
