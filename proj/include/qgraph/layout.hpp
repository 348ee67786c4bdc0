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

#ifndef QGRAPH_LAYOUT_HPP
#define QGRAPH_LAYOUT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/kernels.hpp"

namespace qgraph {

/// Dense symmetric n x n matrix of graph distances, row-major.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// BFS hop counts on the simple graph underlying the multigraph (parallel edges
/// and colors collapse). Unreachable pairs get (largest finite distance + 1).
DistanceMatrix graph_distances(const ColoredGraph &graph);

/// Kamada-Kawai stress: sum_{i<j} (|x_i - x_j| - d_ij)^2 / d_ij^2.
double stress(std::span<const Point3> positions, const DistanceMatrix &distances);

struct LayoutSettings {
    std::uint64_t seed = 0;
    int max_iterations = 1000;
    /// Stop once a full sweep lowers the stress by no more than this fraction of its value.
    double tolerance = 1e-4;
};

struct Layout {
    std::vector<Point3> positions;
    double stress = 0.0;
    /// Stress after initialization and after every sweep; non-increasing.
    std::vector<double> stress_trace;
};

/// Seeded random start in the unit ball, then per-vertex gradient steps with
/// backtracking until the sweep improvement drops below the tolerance. The result is centered
/// on the origin.
Layout kamada_kawai_3d(const ColoredGraph &graph, const LayoutSettings &settings = {});

}  // namespace qgraph

#endif
