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

#include "qgraph/layout.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace qgraph {

namespace {

double local_stress(std::span<const Point3> pos, const DistanceMatrix &dist, std::size_t i, const Point3 &xi) {
    double total = 0.0;
    for (std::size_t j = 0; j < pos.size(); ++j) {
        if (j == i) continue;
        double d = dist.at(i, j);
        double dx = xi[0] - pos[j][0], dy = xi[1] - pos[j][1], dz = xi[2] - pos[j][2];
        double diff = std::sqrt(dx * dx + dy * dy + dz * dz) - d;
        total += diff * diff / (d * d);
    }
    return total;
}

/// Moves vertex i downhill. The first trial step 1/(2 sum_j k_ij) is the
/// localized stress-majorization update, which never increases stress.
void relax_vertex(std::vector<Point3> &pos, const DistanceMatrix &dist, std::size_t i) {
    Point3 grad{0.0, 0.0, 0.0};
    double ksum = 0.0;
    for (std::size_t j = 0; j < pos.size(); ++j) {
        if (j == i) continue;
        double d = dist.at(i, j);
        double k = 1.0 / (d * d);
        ksum += k;
        double delta[3] = {pos[i][0] - pos[j][0], pos[i][1] - pos[j][1], pos[i][2] - pos[j][2]};
        double r = std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]);
        if (r <= 0.0) continue;
        double coef = 2.0 * k * (r - d) / r;
        for (int a = 0; a < 3; ++a) grad[static_cast<std::size_t>(a)] += coef * delta[a];
    }
    if (ksum <= 0.0) return;
    double before = local_stress(pos, dist, i, pos[i]);
    double step = 1.0 / (2.0 * ksum);
    for (int attempt = 0; attempt < 40; ++attempt) {
        Point3 trial{pos[i][0] - step * grad[0], pos[i][1] - step * grad[1], pos[i][2] - step * grad[2]};
        if (local_stress(pos, dist, i, trial) <= before) {
            pos[i] = trial;
            return;
        }
        step *= 0.5;
    }
}

}  // namespace

DistanceMatrix graph_distances(const ColoredGraph &graph) {
    const std::size_t n = graph.num_vertices();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto &e : graph.edges()) {
        if (e.u >= n || e.v >= n || e.u == e.v) continue;
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto &a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }

    constexpr double unreachable = -1.0;
    DistanceMatrix dm{n, std::vector<double>(n * n, unreachable)};
    double max_finite = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        dm.values[s * n + s] = 0.0;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            for (auto y : adj[x]) {
                if (dm.values[s * n + y] != unreachable) continue;
                dm.values[s * n + y] = dm.values[s * n + x] + 1.0;
                max_finite = std::max(max_finite, dm.values[s * n + y]);
                queue.push_back(y);
            }
        }
    }
    for (auto &v : dm.values) {
        if (v == unreachable) v = max_finite + 1.0;
    }
    return dm;
}

double stress(std::span<const Point3> positions, const DistanceMatrix &distances) {
    if (distances.n != positions.size()) throw std::invalid_argument("stress: position count does not match distances");
    return kernels::parallel::stress(positions, distances.values);
}

Layout kamada_kawai_3d(const ColoredGraph &graph, const LayoutSettings &settings) {
    const std::size_t n = graph.num_vertices();
    if (n == 0) throw std::invalid_argument("kamada_kawai_3d: graph has no vertices");
    auto dist = graph_distances(graph);

    Layout layout;
    layout.positions.assign(n, Point3{0.0, 0.0, 0.0});
    std::mt19937_64 rng(settings.seed ^ 0x6A09E667F3BCC909ull);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
    for (auto &p : layout.positions) {
        do {
            p = {uniform(), uniform(), uniform()};
        } while (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] > 1.0);
    }
    if (n == 1) layout.positions[0] = {0.0, 0.0, 0.0};

    double current = stress(layout.positions, dist);
    layout.stress_trace.push_back(current);
    std::vector<Point3> previous;
    for (int sweep = 0; sweep < settings.max_iterations && n > 1; ++sweep) {
        previous = layout.positions;
        for (std::size_t i = 0; i < n; ++i) relax_vertex(layout.positions, dist, i);
        double next = stress(layout.positions, dist);
        if (next > current) {
            // Only reachable through rounding once converged.
            layout.positions = previous;
            break;
        }
        layout.stress_trace.push_back(next);
        bool done = current - next <= settings.tolerance * current;
        current = next;
        if (done) break;
    }

    Point3 centroid{0.0, 0.0, 0.0};
    for (const auto &p : layout.positions) {
        for (std::size_t a = 0; a < 3; ++a) centroid[a] += p[a] / static_cast<double>(n);
    }
    for (auto &p : layout.positions) {
        for (std::size_t a = 0; a < 3; ++a) p[a] -= centroid[a];
    }
    layout.stress = stress(layout.positions, dist);
    return layout;
}

}  // namespace qgraph
