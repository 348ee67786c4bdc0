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

#include "qgraph/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "qgraph/matching.hpp"

namespace qgraph {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Uniform in [-1, 1) from the top 53 bits; identical on every standard library.
double uniform_pm1(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

std::vector<double> random_weights(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    std::vector<double> w(count);
    for (auto &x : w) x = uniform_pm1(rng);
    return w;
}

void check_roster(const std::vector<Vertex> &roster) {
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (roster[i].id != i) throw std::invalid_argument("roster ids must be 0..V-1 in order");
        if (roster[i].dimension < 1) throw std::invalid_argument("roster vertex " + std::to_string(i) + " has dimension < 1");
    }
}

std::vector<std::size_t> sites_for(const ColoredGraph &graph, TaskKind task) {
    return task == TaskKind::analyzer ? input_sites(graph) : ket_sites(graph);
}

std::vector<Amplitude> as_complex(std::span<const double> w) {
    std::vector<Amplitude> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = Amplitude(w[i], 0.0);
    return out;
}

struct Descent {
    std::vector<double> weights;
    double loss = 1.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Gradient descent on the real parts of the weights with Armijo backtracking.
Descent descend(const Objective &objective, std::vector<double> w, const OptimizerSettings &settings,
                const SearchHooks &hooks) {
    constexpr double armijo = 1e-4;
    constexpr double min_step = 1e-20;
    const std::size_t n = w.size();
    std::vector<Amplitude> cw = as_complex(w);
    std::vector<Amplitude> grad(n);
    std::vector<double> trial(n);

    Descent d;
    double loss = objective.loss_gradient(cw, grad);
    double step = settings.initial_step;
    std::size_t it = 0;
    bool converged = false;
    while (it < static_cast<std::size_t>(std::max(0, settings.max_iterations))) {
        hooks.check();
        double g2 = 0.0;
        for (const auto &g : grad) g2 += g.real() * g.real();
        if (loss <= settings.loss_tolerance || std::sqrt(g2) < settings.gradient_tolerance) {
            converged = true;
            break;
        }
        bool accepted = false;
        while (step > min_step) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = w[i] - step * grad[i].real();
                cw[i] = Amplitude(trial[i], 0.0);
            }
            double trial_loss = objective.loss(cw);
            if (trial_loss <= loss - armijo * step * g2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        w.swap(trial);
        cw = as_complex(w);
        loss = objective.loss_gradient(cw, grad);
        step *= 2.0;
        ++it;
    }
    if (!converged && it == static_cast<std::size_t>(std::max(0, settings.max_iterations))) {
        double g2 = 0.0;
        for (const auto &g : grad) g2 += g.real() * g.real();
        converged = loss <= settings.loss_tolerance || std::sqrt(g2) < settings.gradient_tolerance;
    }
    d.weights = std::move(w);
    d.loss = loss;
    d.iterations = it;
    d.converged = converged;
    return d;
}

std::vector<double> real_parts(const ColoredGraph &graph) {
    std::vector<double> w;
    w.reserve(graph.num_edges());
    for (const auto &e : graph.edges()) w.push_back(e.weight.real());
    return w;
}

}  // namespace

std::string_view task_name(TaskKind task) { return task == TaskKind::analyzer ? "analyzer" : "generation"; }

std::optional<TaskKind> parse_task(std::string_view name) {
    if (name == "generation") return TaskKind::generation;
    if (name == "analyzer") return TaskKind::analyzer;
    return std::nullopt;
}

ColoredGraph build_initial_graph(const std::vector<Vertex> &roster, TaskKind task, std::uint64_t seed,
                                 const std::vector<std::pair<std::size_t, std::size_t>> &excluded_pairs) {
    check_roster(roster);
    if (task == TaskKind::generation && roster.size() % 2 != 0) {
        throw std::invalid_argument("generation task needs an even number of vertices, roster has " +
                                    std::to_string(roster.size()) + " (no perfect matching can exist)");
    }
    std::set<std::pair<std::size_t, std::size_t>> excluded;
    for (auto [a, b] : excluded_pairs) excluded.insert({std::min(a, b), std::max(a, b)});

    std::vector<Edge> edges;
    for (std::size_t u = 0; u < roster.size(); ++u) {
        for (std::size_t v = u + 1; v < roster.size(); ++v) {
            if (excluded.count({u, v})) continue;
            for (int cu = 0; cu < roster[u].dimension; ++cu) {
                for (int cv = 0; cv < roster[v].dimension; ++cv) edges.push_back(Edge{u, v, cu, cv, {}});
            }
        }
    }
    auto w = random_weights(edges.size(), seed);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = Amplitude(w[i], 0.0);
    return ColoredGraph(roster, std::move(edges), "initial");
}

ColoredGraph expand_uncolored_edges(const std::vector<Vertex> &roster, const std::vector<GeometryEdge> &geometry,
                                    std::uint64_t seed) {
    check_roster(roster);
    std::set<std::tuple<std::size_t, std::size_t, int, int>> slots;
    for (const auto &g : geometry) {
        if (g.u >= roster.size() || g.v >= roster.size()) {
            throw std::invalid_argument("geometry edge (" + std::to_string(g.u) + "," + std::to_string(g.v) +
                                        ") references a missing vertex");
        }
        if (g.u == g.v) throw std::invalid_argument("geometry edge at vertex " + std::to_string(g.u) + " is a self-loop");
        if (g.cu.has_value() != g.cv.has_value()) {
            throw std::invalid_argument("geometry edge (" + std::to_string(g.u) + "," + std::to_string(g.v) +
                                        ") has a mode on only one endpoint");
        }
        int du = roster[g.u].dimension;
        int dv = roster[g.v].dimension;
        if (g.colored()) {
            if (*g.cu < 0 || *g.cu >= du || *g.cv < 0 || *g.cv >= dv) {
                throw std::invalid_argument("geometry edge (" + std::to_string(g.u) + "," + std::to_string(g.v) + "," +
                                            std::to_string(*g.cu) + "," + std::to_string(*g.cv) +
                                            ") has a mode out of range");
            }
            Edge e = Edge{g.u, g.v, *g.cu, *g.cv, {}}.oriented();
            slots.insert({e.u, e.v, e.cu, e.cv});
        } else {
            for (int cu = 0; cu < du; ++cu) {
                for (int cv = 0; cv < dv; ++cv) {
                    Edge e = Edge{g.u, g.v, cu, cv, {}}.oriented();
                    slots.insert({e.u, e.v, e.cu, e.cv});
                }
            }
        }
    }
    // std::set iteration is already canonical order.
    std::vector<Edge> edges;
    edges.reserve(slots.size());
    for (const auto &[u, v, cu, cv] : slots) edges.push_back(Edge{u, v, cu, cv, {}});
    auto w = random_weights(edges.size(), seed);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = Amplitude(w[i], 0.0);
    return ColoredGraph(roster, std::move(edges), "initial");
}

std::vector<GeometryEdge> complete_geometry(const std::vector<Vertex> &roster) {
    std::vector<GeometryEdge> out;
    for (std::size_t u = 0; u < roster.size(); ++u) {
        for (std::size_t v = u + 1; v < roster.size(); ++v) out.push_back(GeometryEdge{u, v, std::nullopt, std::nullopt});
    }
    return out;
}

Objective::Objective(const ColoredGraph &graph, const TargetState &target, TaskKind task) {
    require_valid(graph);
    auto sites = sites_for(graph, task);
    compiled_ = kernels::compile(graph, sites);
    auto t = task == TaskKind::analyzer ? conjugate(target.state) : target.state;
    target_ = kernels::align_target(compiled_, t);
}

double Objective::loss(std::span<const Amplitude> weights) const {
    return kernels::parallel::loss(compiled_, target_, weights);
}

double Objective::loss_gradient(std::span<const Amplitude> weights, std::span<Amplitude> gradient) const {
    return kernels::parallel::loss_gradient(compiled_, target_, weights, gradient);
}

double loss(const ColoredGraph &graph, const TargetState &target) {
    Objective objective(graph, target, TaskKind::generation);
    return objective.loss(graph.weights());
}

double analyzer_loss(const ColoredGraph &graph, const TargetState &target) {
    if (input_sites(graph).empty()) throw std::invalid_argument("analyzer loss: graph has no input vertices");
    Objective objective(graph, target, TaskKind::analyzer);
    return objective.loss(graph.weights());
}

std::vector<Amplitude> loss_gradient(const ColoredGraph &graph, const TargetState &target) {
    Objective objective(graph, target, TaskKind::generation);
    std::vector<Amplitude> grad(graph.num_edges());
    objective.loss_gradient(graph.weights(), grad);
    return grad;
}

double search_loss(const ColoredGraph &graph, const SearchConfig &config) {
    return config.task == TaskKind::analyzer ? analyzer_loss(graph, config.target) : loss(graph, config.target);
}

OptimizeResult optimize_weights(const ColoredGraph &graph, const TargetState &target, const OptimizerSettings &settings,
                                std::uint64_t seed, TaskKind task, const SearchHooks &hooks) {
    Objective objective(graph, target, task);
    const int restarts = std::max(1, settings.restarts);
    std::vector<Descent> runs(static_cast<std::size_t>(restarts));
    std::exception_ptr failure;

    // Restarts are independent; each owns its weights and the result does not depend on scheduling.
#pragma omp parallel for schedule(dynamic) if (restarts > 1)
    for (int r = 0; r < restarts; ++r) {
        try {
            auto start = r == 0 ? real_parts(graph)
                                : random_weights(graph.num_edges(), seed ^ splitmix64(static_cast<std::uint64_t>(r)));
            runs[static_cast<std::size_t>(r)] = descend(objective, std::move(start), settings, hooks);
        } catch (...) {
#pragma omp critical(qgraph_optimize_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    OptimizeResult result;
    std::size_t best = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        result.iterations += runs[r].iterations;
        result.restart_losses.push_back(runs[r].loss);
        if (runs[r].loss < runs[best].loss) best = r;
        hooks.emit(ProgressEvent{"restart", runs[r].loss, graph.num_edges(), static_cast<int>(r)});
    }
    result.best_restart = best;
    result.loss = runs[best].loss;
    result.converged = runs[best].converged;
    result.graph = graph.with_real_weights(runs[best].weights);
    return result;
}

SearchResult prune(const ColoredGraph &graph, const TargetState &target, const OptimizerSettings &optimizer,
                   const PruneSettings &pruning, TaskKind task, const SearchHooks &hooks) {
    SearchResult result;
    result.graph = graph;
    result.loss = Objective(graph, target, task).loss(graph.weights());
    result.trace.push_back(TraceEntry{graph.num_edges(), result.loss, std::nullopt});
    if (!(result.loss <= pruning.tau)) {
        result.feasible = false;
        return result;
    }

    OptimizerSettings warm = optimizer;
    warm.restarts = 1;
    bool removed = true;
    while (removed && result.graph.num_edges() > 0) {
        removed = false;
        const auto &edges = result.graph.edges();
        std::vector<std::size_t> order(edges.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(edges[a].weight) < std::abs(edges[b].weight);
        });
        for (std::size_t candidate : order) {
            hooks.check();
            ColoredGraph trial = result.graph.without_edge(candidate);
            // Restart 0 is the warm start from the surviving weights.
            auto opt = optimize_weights(trial, target, warm, 0, task, SearchHooks{nullptr, hooks.cancel});
            result.total_iterations += opt.iterations;
            if (opt.loss <= pruning.tau) {
                Edge gone = result.graph.edge(candidate);
                result.graph = opt.graph;
                result.loss = opt.loss;
                ++result.edges_removed;
                result.trace.push_back(TraceEntry{result.graph.num_edges(), result.loss, gone});
                hooks.emit(ProgressEvent{"edge_removed", result.loss, result.graph.num_edges(), std::nullopt});
                removed = true;
                break;
            }
        }
    }
    result.feasible = result.loss <= pruning.tau;
    return result;
}

void validate_config(const SearchConfig &config) {
    check_roster(config.roster);
    if (config.roster.empty()) throw std::invalid_argument("search config: roster is empty");
    if (config.task == TaskKind::generation && config.roster.size() % 2 != 0) {
        throw std::invalid_argument("search config: generation task needs an even number of vertices");
    }
    ColoredGraph bare(config.roster, {});
    auto sites = sites_for(bare, config.task);
    if (config.task == TaskKind::analyzer && sites.empty()) {
        throw std::invalid_argument("search config: analyzer task needs at least one input vertex");
    }
    std::vector<int> dims;
    for (auto s : sites) dims.push_back(config.roster[s].dimension);
    if (config.target.state.empty()) throw std::invalid_argument("search config: target required");
    if (config.target.state.dims != dims) {
        throw std::invalid_argument("search config: target has " + std::to_string(config.target.state.num_sites()) +
                                    " sites whose dimensions do not match the roster's " + std::to_string(dims.size()) +
                                    " ket sites");
    }
    if (config.optimizer.restarts < 1) throw std::invalid_argument("search config: restarts must be >= 1");
    if (config.optimizer.max_iterations < 0) throw std::invalid_argument("search config: max_iterations must be >= 0");
    if (!(config.optimizer.initial_step > 0.0)) throw std::invalid_argument("search config: initial_step must be > 0");
    if (!(config.pruning.tau >= 0.0)) throw std::invalid_argument("search config: tau must be >= 0");
    if (config.initial_edges) expand_uncolored_edges(config.roster, *config.initial_edges, 0);
}

SearchResult discover(const SearchConfig &config, const SearchHooks &hooks) {
    validate_config(config);
    ColoredGraph initial = config.initial_edges
                               ? expand_uncolored_edges(config.roster, *config.initial_edges, config.seed)
                               : build_initial_graph(config.roster, config.task, config.seed);
    initial = initial.with_name(config.name.empty() ? "result" : config.name);

    hooks.emit(ProgressEvent{"optimizing", 1.0, initial.num_edges(), std::nullopt});
    auto optimized = optimize_weights(initial, config.target, config.optimizer, config.seed, config.task, hooks);

    hooks.emit(ProgressEvent{"pruning", optimized.loss, optimized.graph.num_edges(), std::nullopt});
    auto result = prune(optimized.graph, config.target, config.optimizer, config.pruning, config.task, hooks);
    result.seed = config.seed;
    result.initial_iterations = optimized.iterations;
    result.total_iterations += optimized.iterations;
    hooks.emit(ProgressEvent{"done", result.loss, result.graph.num_edges(), std::nullopt});
    return result;
}

QuantumState analyzer_functional(const ColoredGraph &graph) {
    auto sites = input_sites(graph);
    if (sites.empty()) throw std::invalid_argument("analyzer_functional: graph has no input vertices");
    return compute_state_on(graph, sites);
}

AnalyzerReport verify_analyzer(const ColoredGraph &graph, const TargetState &target, double tol) {
    AnalyzerReport report;
    auto functional = analyzer_functional(graph);
    if (functional.dims != target.state.dims) {
        throw std::invalid_argument("verify_analyzer: target dimensions do not match the input vertices");
    }
    double n2 = functional.norm_squared();
    if (!(n2 > 0.0)) {
        // Nothing survives post-selection: every target ket is missing.
        for (const auto &[ket, amp] : target.state.amplitudes) report.offending.push_back(ket);
        return report;
    }
    auto f = normalize_state(functional);
    auto t = normalize_state(target.state);
    // Least-squares factor for f ~ c conj(t): c = <conj t|f> = sum t_k f_k.
    Amplitude c{};
    for (const auto &[ket, amp] : t.amplitudes) c += amp * f.amplitude(ket);
    report.factor = c;

    std::set<Ket> kets;
    for (const auto &[ket, amp] : f.amplitudes) kets.insert(ket);
    for (const auto &[ket, amp] : t.amplitudes) kets.insert(ket);
    for (const auto &ket : kets) {
        Amplitude expected = c * std::conj(t.amplitude(ket));
        if (std::abs(f.amplitude(ket) - expected) > tol) report.offending.push_back(ket);
    }
    report.is_valid = report.offending.empty();
    return report;
}

}  // namespace qgraph
