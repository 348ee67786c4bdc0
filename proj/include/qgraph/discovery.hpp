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

// Topology search: build the largest admissible graph, optimize its real edge
// weights against a target, then prune edges one at a time while the loss
// stays at or below a threshold.

#ifndef QGRAPH_DISCOVERY_HPP
#define QGRAPH_DISCOVERY_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/kernels.hpp"
#include "qgraph/targets.hpp"

namespace qgraph {

enum class TaskKind { generation, analyzer };

std::string_view task_name(TaskKind task);
std::optional<TaskKind> parse_task(std::string_view name);

/// An initial-geometry entry. Without modes it stands for every mode pair of (u, v).
struct GeometryEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    std::optional<int> cu;
    std::optional<int> cv;

    bool colored() const { return cu.has_value(); }
    bool operator==(const GeometryEdge &) const = default;
};

struct OptimizerSettings {
    int max_iterations = 2000;
    int restarts = 5;
    double gradient_tolerance = 1e-8;
    double loss_tolerance = 1e-10;
    /// First trial step of the backtracking line search; grows x2 after each accepted step.
    double initial_step = 0.5;

    bool operator==(const OptimizerSettings &) const = default;
};

struct PruneSettings {
    /// A removal is kept iff the re-optimized loss is <= tau.
    double tau = 1e-2;

    bool operator==(const PruneSettings &) const = default;
};

struct SearchConfig {
    std::string name;
    std::vector<Vertex> roster;
    TaskKind task = TaskKind::generation;
    TargetState target;
    std::optional<std::vector<GeometryEdge>> initial_edges;
    OptimizerSettings optimizer;
    PruneSettings pruning;
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument describing the first problem found.
void validate_config(const SearchConfig &config);

struct ProgressEvent {
    /// optimizing | restart | pruning | edge_removed | done
    std::string kind;
    double loss = 1.0;
    std::size_t edge_count = 0;
    std::optional<int> restart;
};

class SearchCancelled : public std::runtime_error {
   public:
    SearchCancelled() : std::runtime_error("search cancelled") {}
};

struct SearchHooks {
    std::function<void(const ProgressEvent &)> on_progress;
    /// Polled between optimizer iterations; when set the search throws SearchCancelled.
    const std::atomic<bool> *cancel = nullptr;

    void emit(const ProgressEvent &event) const {
        if (on_progress) on_progress(event);
    }
    void check() const {
        if (cancel && cancel->load(std::memory_order_relaxed)) throw SearchCancelled();
    }
};

struct TraceEntry {
    std::size_t edge_count = 0;
    double loss = 1.0;
    /// Slot of the edge whose removal produced this entry (absent for the starting point).
    std::optional<Edge> removed;
};

struct SearchResult {
    ColoredGraph graph;
    double loss = 1.0;
    bool feasible = false;
    std::vector<TraceEntry> trace;
    std::size_t edges_removed = 0;
    std::uint64_t seed = 0;
    /// Accepted optimizer steps in the initial optimization.
    std::size_t initial_iterations = 0;
    /// Accepted optimizer steps over the whole search (initial optimization plus pruning).
    std::size_t total_iterations = 0;
};

struct OptimizeResult {
    ColoredGraph graph;
    double loss = 1.0;
    bool converged = false;
    /// Summed over restarts.
    std::size_t iterations = 0;
    std::size_t best_restart = 0;
    std::vector<double> restart_losses;
};

/// Largest graph over `roster`: every (u, v, cu, cv) allowed by the dimensions, with weights drawn
/// uniformly from [-1, 1] in canonical edge order. Odd rosters are rejected for generation tasks.
ColoredGraph build_initial_graph(const std::vector<Vertex> &roster, TaskKind task = TaskKind::generation,
                                 std::uint64_t seed = 0,
                                 const std::vector<std::pair<std::size_t, std::size_t>> &excluded_pairs = {});

/// Expands uncolored entries to all dim(u) * dim(v) mode pairs and deduplicates; weights drawn as in
/// build_initial_graph. Throws std::invalid_argument for unknown vertices or modes.
ColoredGraph expand_uncolored_edges(const std::vector<Vertex> &roster, const std::vector<GeometryEdge> &geometry,
                                    std::uint64_t seed = 0);

/// Uncolored complete geometry over the roster.
std::vector<GeometryEdge> complete_geometry(const std::vector<Vertex> &roster);

/// Precomputed matchings of a fixed topology against a fixed target.
class Objective {
   public:
    Objective(const ColoredGraph &graph, const TargetState &target, TaskKind task = TaskKind::generation);

    double loss(std::span<const Amplitude> weights) const;
    double loss_gradient(std::span<const Amplitude> weights, std::span<Amplitude> gradient) const;
    const kernels::CompiledGraph &compiled() const { return compiled_; }

   private:
    kernels::CompiledGraph compiled_;
    std::vector<Amplitude> target_;
};

/// 1 - fidelity(compute_state(g), target); 1 when the state vanishes.
double loss(const ColoredGraph &graph, const TargetState &target);

/// Analyzer loss: 1 - fidelity(analyzer_functional(g), conj(target)).
double analyzer_loss(const ColoredGraph &graph, const TargetState &target);

/// dLoss/dRe(w_e) + i dLoss/dIm(w_e) for every edge.
std::vector<Amplitude> loss_gradient(const ColoredGraph &graph, const TargetState &target);

/// Loss of `graph` under the task of `config`.
double search_loss(const ColoredGraph &graph, const SearchConfig &config);

/// Gradient descent with backtracking over real weights. Restart 0 starts from the graph's own
/// (real parts of the) weights, later restarts from seeded uniform draws in [-1, 1].
OptimizeResult optimize_weights(const ColoredGraph &graph, const TargetState &target, const OptimizerSettings &settings,
                                std::uint64_t seed, TaskKind task = TaskKind::generation,
                                const SearchHooks &hooks = {});

/// Removes edges (ascending |weight|, ties in canonical order) while the warm-started re-optimized
/// loss stays <= tau. Returns the input unchanged when its own loss exceeds tau.
SearchResult prune(const ColoredGraph &graph, const TargetState &target, const OptimizerSettings &optimizer,
                   const PruneSettings &pruning, TaskKind task = TaskKind::generation, const SearchHooks &hooks = {});

/// Build or expand the initial graph, optimize, prune.
SearchResult discover(const SearchConfig &config, const SearchHooks &hooks = {});

/// Coincidence amplitude for each ket over the input vertices; all other vertices are coverage-only.
/// Throws std::invalid_argument when the graph has no input vertex.
QuantumState analyzer_functional(const ColoredGraph &graph);

struct AnalyzerReport {
    bool is_valid = false;
    /// Global factor c with functional ~ c * conj(target), after normalizing the functional.
    Amplitude factor{};
    std::vector<Ket> offending;
};

/// Valid iff the normalized functional equals c * conj(target) within `tol` on every ket, where c is
/// the least-squares global factor. Invariant under rescaling all weights.
AnalyzerReport verify_analyzer(const ColoredGraph &graph, const TargetState &target, double tol = 1e-6);

}  // namespace qgraph

#endif
