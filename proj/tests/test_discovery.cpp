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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qgraph/discovery.hpp"
#include "qgraph/matching.hpp"
#include "qgraph/targets.hpp"

namespace qgraph {
namespace {

std::vector<Vertex> detectors(std::size_t n, int d) {
    std::vector<Vertex> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back(detector(i, d));
    return r;
}

SearchConfig ghz_config(std::uint64_t seed) {
    SearchConfig c;
    c.name = "ghz";
    c.roster = detectors(4, 2);
    c.target = ghz_state(4, 2);
    c.seed = seed;
    return c;
}

TEST(Initial, EdgeCountsAndDeterminism) {
    EXPECT_EQ(build_initial_graph(detectors(4, 2)).num_edges(), 24u);
    EXPECT_EQ(build_initial_graph(detectors(6, 2)).num_edges(), 60u);
    EXPECT_EQ(build_initial_graph(detectors(4, 2), TaskKind::generation, 3),
              build_initial_graph(detectors(4, 2), TaskKind::generation, 3));
    EXPECT_NE(build_initial_graph(detectors(4, 2), TaskKind::generation, 3).weights(),
              build_initial_graph(detectors(4, 2), TaskKind::generation, 4).weights());
    EXPECT_EQ(build_initial_graph(detectors(4, 2), TaskKind::generation, 0, {{1, 0}}).num_edges(), 20u);
    for (const auto &e : build_initial_graph(detectors(4, 2), TaskKind::generation, 9).edges()) {
        EXPECT_LE(std::abs(e.weight.real()), 1.0);
        EXPECT_EQ(e.weight.imag(), 0.0);
    }
}

TEST(Initial, OddRosterOnlyForAnalyzers) {
    EXPECT_THROW(build_initial_graph(detectors(3, 2)), std::invalid_argument);
    std::vector<Vertex> roster = {input(0, 2), input(1, 2), ancilla(2)};
    EXPECT_NO_THROW(build_initial_graph(roster, TaskKind::analyzer));
}

TEST(Initial, CompleteUncoloredGeometryReproducesFullGraph) {
    auto roster = detectors(4, 2);
    EXPECT_EQ(expand_uncolored_edges(roster, complete_geometry(roster), 11),
              build_initial_graph(roster, TaskKind::generation, 11));
}

TEST(Initial, ExpansionDeduplicatesAndChecksModes) {
    auto roster = detectors(4, 2);
    std::vector<GeometryEdge> geo = {{0, 1, {}, {}}, {1, 0, 1, 1}, {2, 3, 0, 1}};
    auto g = expand_uncolored_edges(roster, geo, 0);
    EXPECT_EQ(g.num_edges(), 5u);
    EXPECT_THROW(expand_uncolored_edges(roster, {{0, 1, 2, 0}}, 0), std::invalid_argument);
    EXPECT_THROW(expand_uncolored_edges(roster, {{0, 7, {}, {}}}, 0), std::invalid_argument);
}

TEST(Gradient, MatchesCentralDifferencesForGeneration) {
    std::mt19937_64 rng(17);
    int checked = 0;
    while (checked < 30) {
        auto g = oracle::random_graph(rng, 6, 12, 2);
        auto state = compute_state(g);
        if (state.empty()) continue;
        auto target = TargetState::from_state(state, "self");
        // Perturb so the target is not an exact optimum.
        std::uniform_real_distribution<double> u(-0.3, 0.3);
        auto w = g.weights();
        for (auto &x : w) x += Amplitude(u(rng), u(rng));
        Objective obj(g, target);
        std::vector<Amplitude> analytic(w.size());
        obj.loss_gradient(w, analytic);
        auto numeric = oracle::central_difference([&](const std::vector<Amplitude> &x) { return obj.loss(x); }, w);
        for (std::size_t i = 0; i < w.size(); ++i) {
            EXPECT_NEAR(analytic[i].real(), numeric[i].real(), 1e-7);
            EXPECT_NEAR(analytic[i].imag(), numeric[i].imag(), 1e-7);
        }
        ++checked;
    }
}

TEST(Gradient, MatchesCentralDifferencesForAnalyzer) {
    std::vector<Vertex> roster = {input(0, 2), input(1, 2), detector(2, 2), detector(3, 2)};
    auto g = build_initial_graph(roster, TaskKind::analyzer, 5);
    auto w = g.weights();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto &x : w) x += Amplitude(0.0, u(rng));
    Objective obj(g, bell_pair(2), TaskKind::analyzer);
    std::vector<Amplitude> analytic(w.size());
    obj.loss_gradient(w, analytic);
    auto numeric = oracle::central_difference([&](const std::vector<Amplitude> &x) { return obj.loss(x); }, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        EXPECT_NEAR(analytic[i].real(), numeric[i].real(), 1e-7);
        EXPECT_NEAR(analytic[i].imag(), numeric[i].imag(), 1e-7);
    }
}

TEST(Loss, FreeFunctionsAgreeWithObjective) {
    auto g = build_initial_graph(detectors(4, 2), TaskKind::generation, 2);
    auto t = ghz_state(4, 2);
    Objective obj(g, t);
    EXPECT_NEAR(loss(g, t), obj.loss(g.weights()), 1e-14);
    EXPECT_NEAR(loss(g, t), 1.0 - fidelity(compute_state(g), t.state), 1e-14);
    auto grad = loss_gradient(g, t);
    std::vector<Amplitude> expected(g.num_edges());
    obj.loss_gradient(g.weights(), expected);
    EXPECT_EQ(grad, expected);
}

TEST(Optimize, LowersLossAndIsDeterministic) {
    auto g = build_initial_graph(detectors(4, 2), TaskKind::generation, 2);
    auto t = ghz_state(4, 2);
    auto a = optimize_weights(g, t, OptimizerSettings{}, 42);
    auto b = optimize_weights(g, t, OptimizerSettings{}, 42);
    EXPECT_LT(a.loss, loss(g, t));
    EXPECT_LT(a.loss, 1e-6);
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.restart_losses.size(), 5u);
    EXPECT_EQ(a.loss, a.restart_losses[a.best_restart]);
}

TEST(Optimize, ZeroIterationsKeepsWarmStart) {
    auto g = build_initial_graph(detectors(4, 2), TaskKind::generation, 2);
    OptimizerSettings s;
    s.max_iterations = 0;
    s.restarts = 1;
    auto r = optimize_weights(g, ghz_state(4, 2), s, 1);
    EXPECT_EQ(r.graph.weights(), g.weights());
    EXPECT_EQ(r.iterations, 0u);
}

TEST(Prune, KeepsLossUnderThresholdAndTracesRemovals) {
    auto r = discover(ghz_config(3));
    ASSERT_TRUE(r.feasible);
    EXPECT_LE(r.loss, 1e-2);
    EXPECT_EQ(r.trace.size(), r.edges_removed + 1);
    EXPECT_EQ(r.trace.front().edge_count, 24u);
    EXPECT_EQ(r.trace.back().edge_count, r.graph.num_edges());
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        EXPECT_TRUE(r.trace[i].removed.has_value());
        EXPECT_LE(r.trace[i].loss, 1e-2);
        EXPECT_EQ(r.trace[i].edge_count + 1, r.trace[i - 1].edge_count);
    }
    EXPECT_GE(r.total_iterations, r.initial_iterations);
}

TEST(Prune, InfeasibleInputIsReturnedUnchanged) {
    // Single-mode square cannot produce a 2-dimensional GHZ state.
    ColoredGraph g(detectors(4, 2), {Edge{0, 1, 0, 0, 1.0}, Edge{2, 3, 0, 0, 1.0}});
    auto r = prune(g, ghz_state(4, 2), OptimizerSettings{}, PruneSettings{});
    EXPECT_FALSE(r.feasible);
    EXPECT_EQ(r.graph, g);
    EXPECT_EQ(r.edges_removed, 0u);
}

TEST(Discover, ProgressEventsInOrder) {
    std::vector<std::string> kinds;
    SearchHooks hooks;
    hooks.on_progress = [&](const ProgressEvent &e) { kinds.push_back(e.kind); };
    auto r = discover(ghz_config(1), hooks);
    ASSERT_GE(kinds.size(), 4u);
    EXPECT_EQ(kinds.front(), "optimizing");
    EXPECT_EQ(kinds.back(), "done");
    EXPECT_EQ(std::count(kinds.begin(), kinds.end(), "restart"), 5);
    EXPECT_EQ(static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), "edge_removed")), r.edges_removed);
    auto pruning = std::find(kinds.begin(), kinds.end(), "pruning");
    ASSERT_NE(pruning, kinds.end());
    EXPECT_EQ(std::find(kinds.begin(), pruning, "edge_removed"), pruning);
}

TEST(Discover, CancelTokenStopsSearch) {
    std::atomic<bool> cancel{true};
    SearchHooks hooks;
    hooks.cancel = &cancel;
    EXPECT_THROW(discover(ghz_config(1), hooks), SearchCancelled);
}

TEST(Discover, SameSeedSameResult) {
    auto a = discover(ghz_config(6));
    auto b = discover(ghz_config(6));
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.total_iterations, b.total_iterations);
}

TEST(Config, ValidationMessages) {
    auto c = ghz_config(1);
    EXPECT_NO_THROW(validate_config(c));
    auto odd = c;
    odd.roster.pop_back();
    EXPECT_THROW(validate_config(odd), std::invalid_argument);
    auto mismatch = c;
    mismatch.target = ghz_state(4, 3);
    EXPECT_THROW(validate_config(mismatch), std::invalid_argument);
    auto no_target = c;
    no_target.target = TargetState{};
    EXPECT_THROW(validate_config(no_target), std::invalid_argument);
    auto restarts = c;
    restarts.optimizer.restarts = 0;
    EXPECT_THROW(validate_config(restarts), std::invalid_argument);
    auto analyzer = c;
    analyzer.task = TaskKind::analyzer;
    EXPECT_THROW(validate_config(analyzer), std::invalid_argument);
}

TEST(Analyzer, FunctionalAndValidity) {
    std::vector<Vertex> inputs = {input(0, 2), input(1, 2)};
    ColoredGraph good(inputs, {Edge{0, 1, 0, 0, 1.0}, Edge{0, 1, 1, 1, 1.0}});
    auto f = analyzer_functional(good);
    EXPECT_EQ(f.amplitude({0, 0}), Amplitude(1.0));
    EXPECT_EQ(f.amplitude({1, 1}), Amplitude(1.0));
    auto report = verify_analyzer(good, bell_pair(2));
    EXPECT_TRUE(report.is_valid);
    EXPECT_TRUE(report.offending.empty());

    ColoredGraph scaled(inputs, {Edge{0, 1, 0, 0, {0.0, 3.0}}, Edge{0, 1, 1, 1, {0.0, 3.0}}});
    EXPECT_TRUE(verify_analyzer(scaled, bell_pair(2)).is_valid);

    ColoredGraph flipped(inputs, {Edge{0, 1, 0, 0, 1.0}, Edge{0, 1, 1, 1, -1.0}});
    auto bad = verify_analyzer(flipped, bell_pair(2));
    EXPECT_FALSE(bad.is_valid);
    EXPECT_FALSE(bad.offending.empty());

    EXPECT_THROW(analyzer_functional(ColoredGraph(detectors(2, 2), {})), std::invalid_argument);
}

TEST(Analyzer, ComplexTargetNeedsConjugateFunctional) {
    std::vector<Vertex> inputs = {input(0, 2), input(1, 2)};
    QuantumState t({2, 2});
    t.set({0, 0}, 1.0);
    t.set({1, 1}, {0.0, 1.0});
    auto target = TargetState::from_state(t, "phase bell");
    ColoredGraph conj(inputs, {Edge{0, 1, 0, 0, 1.0}, Edge{0, 1, 1, 1, {0.0, -1.0}}});
    ColoredGraph same(inputs, {Edge{0, 1, 0, 0, 1.0}, Edge{0, 1, 1, 1, {0.0, 1.0}}});
    EXPECT_TRUE(verify_analyzer(conj, target).is_valid);
    EXPECT_FALSE(verify_analyzer(same, target).is_valid);
    EXPECT_NEAR(analyzer_loss(conj, target), 0.0, 1e-12);
}

}  // namespace
}  // namespace qgraph
