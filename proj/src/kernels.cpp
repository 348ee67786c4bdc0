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

#include "qgraph/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qgraph::kernels {

namespace {

/// forward[w] = indices of edges (w, v) with v > w, ascending.
std::vector<std::vector<std::size_t>> forward_adjacency(const ColoredGraph &graph) {
    std::vector<std::vector<std::size_t>> forward(graph.num_vertices());
    const auto &edges = graph.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) forward[edges[i].u].push_back(i);
    return forward;
}

class MatchingSearch {
   public:
    MatchingSearch(const ColoredGraph &graph, const std::vector<std::vector<std::size_t>> &forward)
        : graph_(graph), forward_(forward), covered_(graph.num_vertices(), 0) {}

    /// Enumerates completions after forcing `first` (an edge at vertex 0).
    void run_from(std::size_t first, std::vector<PerfectMatching> &out) {
        const Edge &e = graph_.edge(first);
        covered_[e.u] = covered_[e.v] = 1;
        current_.push_back(first);
        recurse(out);
        current_.pop_back();
        covered_[e.u] = covered_[e.v] = 0;
    }

    void run(std::vector<PerfectMatching> &out) { recurse(out); }

   private:
    void recurse(std::vector<PerfectMatching> &out) {
        std::size_t n = covered_.size();
        std::size_t w = 0;
        while (w < n && covered_[w]) ++w;
        if (w == n) {
            out.push_back(PerfectMatching{current_});
            return;
        }
        // The lowest uncovered vertex can only be matched forwards.
        for (std::size_t idx : forward_[w]) {
            std::size_t v = graph_.edge(idx).v;
            if (covered_[v]) continue;
            covered_[w] = covered_[v] = 1;
            current_.push_back(idx);
            recurse(out);
            current_.pop_back();
            covered_[w] = covered_[v] = 0;
        }
    }

    const ColoredGraph &graph_;
    const std::vector<std::vector<std::size_t>> &forward_;
    std::vector<char> covered_;
    std::vector<std::size_t> current_;
};

void check_spans(const CompiledGraph &c, std::size_t weights, std::size_t out, std::size_t expected_out,
                 const char *what) {
    if (weights != c.num_edges) throw std::invalid_argument(std::string(what) + ": weight count mismatch");
    if (out != expected_out) throw std::invalid_argument(std::string(what) + ": output size mismatch");
}

inline Amplitude matching_product(const CompiledGraph &c, std::size_t m, std::span<const Amplitude> weights) {
    Amplitude p{1.0, 0.0};
    for (auto e : c.matching(m)) p *= weights[e];
    return p;
}

inline Amplitude product_without(const CompiledGraph &c, std::size_t m, std::size_t skip,
                                 std::span<const Amplitude> weights) {
    Amplitude p{1.0, 0.0};
    for (auto e : c.matching(m)) {
        if (e != skip) p *= weights[e];
    }
    return p;
}

inline Amplitude ket_amplitude(const CompiledGraph &c, std::size_t k, std::span<const Amplitude> weights) {
    Amplitude sum{};
    for (std::size_t m = c.ket_offsets[k]; m < c.ket_offsets[k + 1]; ++m) sum += matching_product(c, m, weights);
    return sum;
}

struct Overlap {
    Amplitude overlap;  // <t|psi>
    double norm2;       // <psi|psi>
};

Overlap overlap_of(std::span<const Amplitude> target, std::span<const Amplitude> psi) {
    Overlap o{{}, 0.0};
    for (std::size_t k = 0; k < psi.size(); ++k) {
        o.overlap += std::conj(target[k]) * psi[k];
        o.norm2 += std::norm(psi[k]);
    }
    return o;
}

double loss_from(const Overlap &o) {
    if (!(o.norm2 > 0.0)) return 1.0;
    double f = std::norm(o.overlap) / o.norm2;
    return 1.0 - std::min(1.0, f);
}

/// beta_k = dLoss/dconj(psi_k) * 2, so that grad_e = sum_m beta_ket(m) conj(prod_{f != e} w_f).
std::vector<Amplitude> gradient_coefficients(std::span<const Amplitude> target, std::span<const Amplitude> psi,
                                             const Overlap &o) {
    std::vector<Amplitude> beta(psi.size());
    double a2 = std::norm(o.overlap);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        beta[k] = 2.0 * (-o.overlap * target[k] / o.norm2 + a2 * psi[k] / (o.norm2 * o.norm2));
    }
    return beta;
}

inline Amplitude edge_gradient(const CompiledGraph &c, std::size_t e, std::span<const Amplitude> beta,
                               std::span<const Amplitude> weights) {
    Amplitude g{};
    for (std::size_t i = c.edge_offsets[e]; i < c.edge_offsets[e + 1]; ++i) {
        std::size_t m = c.edge_matchings[i];
        g += beta[c.matching_ket[m]] * std::conj(product_without(c, m, e, weights));
    }
    return g;
}

inline double stress_row(std::span<const Point3> positions, std::span<const double> distances, std::size_t i) {
    std::size_t n = positions.size();
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
        double d = distances[i * n + j];
        double dx = positions[i][0] - positions[j][0];
        double dy = positions[i][1] - positions[j][1];
        double dz = positions[i][2] - positions[j][2];
        double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        double diff = r - d;
        row += diff * diff / (d * d);
    }
    return row;
}

void check_stress_shape(std::span<const Point3> positions, std::span<const double> distances) {
    if (distances.size() != positions.size() * positions.size()) {
        throw std::invalid_argument("stress: distance matrix does not match the number of positions");
    }
}

}  // namespace

CompiledGraph compile(const ColoredGraph &graph, std::span<const std::size_t> sites) {
    CompiledGraph c;
    c.num_edges = graph.num_edges();
    c.matching_size = graph.num_vertices() / 2;
    for (auto s : sites) c.site_dims.push_back(graph.vertex(s).dimension);

    auto matchings = parallel::enumerate_perfect_matchings(graph);

    // Mode of each vertex under each matching, read off the covering edge.
    std::vector<Ket> ket_of(matchings.size());
    std::vector<int> mode(graph.num_vertices(), 0);
    for (std::size_t m = 0; m < matchings.size(); ++m) {
        for (auto idx : matchings[m].edges) {
            const Edge &e = graph.edge(idx);
            mode[e.u] = e.cu;
            mode[e.v] = e.cv;
        }
        for (const auto &v : graph.vertices()) {
            if (v.role == VertexRole::ancilla && mode[v.id] >= v.dimension) {
                throw std::invalid_argument("ancilla " + std::to_string(v.id) + " covered at mode " +
                                            std::to_string(mode[v.id]) + " outside its dimension " +
                                            std::to_string(v.dimension));
            }
        }
        Ket ket(sites.size());
        for (std::size_t s = 0; s < sites.size(); ++s) ket[s] = mode[sites[s]];
        ket_of[m] = std::move(ket);
    }

    std::vector<std::size_t> order(matchings.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ket_of[a] < ket_of[b]; });

    c.members.reserve(matchings.size() * c.matching_size);
    c.matching_ket.reserve(matchings.size());
    for (std::size_t row = 0; row < order.size(); ++row) {
        const auto &ket = ket_of[order[row]];
        if (c.kets.empty() || c.kets.back() != ket) {
            c.kets.push_back(ket);
            c.ket_offsets.push_back(row);
        }
        c.matching_ket.push_back(static_cast<std::uint32_t>(c.kets.size() - 1));
        for (auto idx : matchings[order[row]].edges) c.members.push_back(static_cast<std::uint32_t>(idx));
    }
    c.ket_offsets.push_back(order.size());

    std::vector<std::size_t> counts(c.num_edges + 1, 0);
    for (auto e : c.members) ++counts[e + 1];
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    c.edge_offsets = counts;
    c.edge_matchings.assign(c.members.size(), 0);
    std::vector<std::size_t> fill(c.edge_offsets.begin(), c.edge_offsets.end() - 1);
    for (std::size_t m = 0; m < c.num_matchings(); ++m) {
        for (auto e : c.matching(m)) c.edge_matchings[fill[e]++] = static_cast<std::uint32_t>(m);
    }
    return c;
}

std::vector<Amplitude> align_target(const CompiledGraph &compiled, const QuantumState &target) {
    if (target.dims != compiled.site_dims) {
        throw std::invalid_argument("target site dimensions do not match the graph's ket sites");
    }
    std::vector<Amplitude> out(compiled.num_kets());
    for (std::size_t k = 0; k < compiled.num_kets(); ++k) out[k] = target.amplitude(compiled.kets[k]);
    return out;
}

namespace serial {

std::vector<PerfectMatching> enumerate_perfect_matchings(const ColoredGraph &graph) {
    std::vector<PerfectMatching> out;
    if (graph.num_vertices() % 2 != 0) return out;
    auto forward = forward_adjacency(graph);
    MatchingSearch search(graph, forward);
    search.run(out);
    return out;
}

void amplitudes(const CompiledGraph &compiled, std::span<const Amplitude> weights, std::span<Amplitude> out) {
    check_spans(compiled, weights.size(), out.size(), compiled.num_kets(), "amplitudes");
    for (std::size_t k = 0; k < compiled.num_kets(); ++k) out[k] = ket_amplitude(compiled, k, weights);
}

double loss_gradient(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights,
                     std::span<Amplitude> gradient) {
    check_spans(compiled, weights.size(), gradient.size(), compiled.num_edges, "loss_gradient");
    std::vector<Amplitude> psi(compiled.num_kets());
    amplitudes(compiled, weights, psi);
    Overlap o = overlap_of(target, psi);
    if (!(o.norm2 > 0.0)) {
        std::fill(gradient.begin(), gradient.end(), Amplitude{});
        return 1.0;
    }
    auto beta = gradient_coefficients(target, psi, o);
    for (std::size_t e = 0; e < compiled.num_edges; ++e) gradient[e] = edge_gradient(compiled, e, beta, weights);
    return loss_from(o);
}

double loss(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights) {
    std::vector<Amplitude> psi(compiled.num_kets());
    amplitudes(compiled, weights, psi);
    return loss_from(overlap_of(target, psi));
}

double stress(std::span<const Point3> positions, std::span<const double> distances) {
    check_stress_shape(positions, distances);
    double total = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) total += stress_row(positions, distances, i);
    return total;
}

}  // namespace serial

namespace parallel {

std::vector<PerfectMatching> enumerate_perfect_matchings(const ColoredGraph &graph) {
    std::vector<PerfectMatching> out;
    std::size_t n = graph.num_vertices();
    if (n % 2 != 0) return out;
    if (n == 0) return {PerfectMatching{}};
    auto forward = forward_adjacency(graph);
    const auto &branches = forward[0];
    std::vector<std::vector<PerfectMatching>> parts(branches.size());
    // Vertex 0 is always the first branch point; each of its edges seeds an independent subtree.
    const long nb = static_cast<long>(branches.size());
#pragma omp parallel for schedule(dynamic) if (nb > 1 && graph.num_edges() > 32)
    for (long b = 0; b < nb; ++b) {
        MatchingSearch search(graph, forward);
        search.run_from(branches[static_cast<std::size_t>(b)], parts[static_cast<std::size_t>(b)]);
    }
    std::size_t total = 0;
    for (const auto &p : parts) total += p.size();
    out.reserve(total);
    for (auto &p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
    return out;
}

void amplitudes(const CompiledGraph &compiled, std::span<const Amplitude> weights, std::span<Amplitude> out) {
    check_spans(compiled, weights.size(), out.size(), compiled.num_kets(), "amplitudes");
    const long nk = static_cast<long>(compiled.num_kets());
    const bool wide = compiled.num_matchings() * compiled.matching_size >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
    for (long k = 0; k < nk; ++k) {
        out[static_cast<std::size_t>(k)] = ket_amplitude(compiled, static_cast<std::size_t>(k), weights);
    }
}

double loss_gradient(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights,
                     std::span<Amplitude> gradient) {
    check_spans(compiled, weights.size(), gradient.size(), compiled.num_edges, "loss_gradient");
    std::vector<Amplitude> psi(compiled.num_kets());
    amplitudes(compiled, weights, psi);
    Overlap o = overlap_of(target, psi);
    if (!(o.norm2 > 0.0)) {
        std::fill(gradient.begin(), gradient.end(), Amplitude{});
        return 1.0;
    }
    auto beta = gradient_coefficients(target, psi, o);
    const long ne = static_cast<long>(compiled.num_edges);
    const bool wide = compiled.edge_matchings.size() * compiled.matching_size >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
    for (long e = 0; e < ne; ++e) {
        gradient[static_cast<std::size_t>(e)] = edge_gradient(compiled, static_cast<std::size_t>(e), beta, weights);
    }
    return loss_from(o);
}

double loss(const CompiledGraph &compiled, std::span<const Amplitude> target, std::span<const Amplitude> weights) {
    std::vector<Amplitude> psi(compiled.num_kets());
    amplitudes(compiled, weights, psi);
    return loss_from(overlap_of(target, psi));
}

double stress(std::span<const Point3> positions, std::span<const double> distances) {
    check_stress_shape(positions, distances);
    std::size_t n = positions.size();
    std::vector<double> rows(n, 0.0);
    const long nl = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 16) if (n * n >= kParallelThreshold)
    for (long i = 0; i < nl; ++i) rows[static_cast<std::size_t>(i)] = stress_row(positions, distances, static_cast<std::size_t>(i));
    double total = 0.0;
    for (double r : rows) total += r;
    return total;
}

}  // namespace parallel

}  // namespace qgraph::kernels
