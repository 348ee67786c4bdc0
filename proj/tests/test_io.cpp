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
#include "qgraph/io.hpp"
#include "qgraph/targets.hpp"

namespace qgraph {
namespace {

ColoredGraph sample() {
    return ColoredGraph({detector(0, 2), detector(1, 2), ancilla(2), input(3, 3)},
                        {Edge{0, 1, 1, 0, {0.1, -0.25}}, Edge{2, 3, 0, 2, 1.0 / 3.0}}, "sample");
}

TEST(GraphDocument, RoundTripIsByteIdentical) {
    GraphDocument doc{sample(), std::vector<Point3>{{0, 0, 0}, {1, 2, 3}, {0.1, 0.2, 0.3}, {-1, -2, -3}},
                      KetAmplitudes{{{0, 1, 2}, {0.5, 0.5}}}};
    auto text = encode_graph(doc);
    auto back = decode_graph(text);
    EXPECT_EQ(back.graph, doc.graph);
    EXPECT_EQ(back.positions, doc.positions);
    EXPECT_EQ(encode_graph(back), text);
}

TEST(GraphDocument, DoublesSurviveBitExactly) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        auto g = oracle::random_graph(rng, 8, 16, 3);
        auto back = decode_graph(encode_graph(g)).graph;
        EXPECT_EQ(back.weights(), g.weights());
    }
}

TEST(GraphDocument, SyntaxErrorsReportLineAndColumn) {
    try {
        decode_graph("{\n  \"format\": \"qgraph-graph\",\n  oops\n}");
        FAIL();
    } catch (const DecodeError &e) {
        EXPECT_EQ(e.where().rfind("line 3", 0), 0u) << e.where();
    }
}

TEST(GraphDocument, SchemaErrorsReportFieldPath) {
    auto text = encode_graph(sample());
    auto pos = text.find("\"cu\": 1");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 7, "\"cu\": \"x\"");
    try {
        decode_graph(text);
        FAIL();
    } catch (const DecodeError &e) {
        EXPECT_EQ(e.where(), "edges[0].cu");
    }
}

TEST(GraphDocument, WrongFormatOrVersionRejected) {
    auto text = encode_graph(sample());
    auto other = text;
    other.replace(other.find("qgraph-graph"), 12, "qgraph-state");
    EXPECT_THROW(decode_graph(other), DecodeError);
    auto v2 = text;
    v2.replace(v2.find("\"version\": 1"), 12, "\"version\": 2");
    EXPECT_THROW(decode_graph(v2), DecodeError);
    EXPECT_THROW(decode_graph("[]"), DecodeError);
    EXPECT_THROW(decode_graph(""), DecodeError);
}

TEST(GraphDocument, InvalidButWellFormedGraphDecodes) {
    ColoredGraph bad({detector(0, 2), detector(1, 2)}, {Edge{0, 1, 5, 0, 1.0}});
    auto back = decode_graph(encode_graph(bad)).graph;
    EXPECT_FALSE(validate_graph(back).ok());
}

TEST(Template, RoundTripKeepsEverything) {
    auto config = make_search_config(sample(), TargetState::from_state(
                                                   [] {
                                                       QuantumState s({2, 2, 3});
                                                       s.set({0, 0, 0}, 1.0);
                                                       s.set({1, 1, 2}, {0.0, 1.0});
                                                       return s;
                                                   }(),
                                                   "custom"),
                                     TaskKind::generation, true);
    config.optimizer.restarts = 3;
    config.pruning.tau = 0.05;
    config.seed = 77;
    auto text = encode_search_template(config);
    auto back = decode_search_template(text);
    EXPECT_EQ(back.name, "sample");
    EXPECT_EQ(back.optimizer, config.optimizer);
    EXPECT_EQ(back.pruning, config.pruning);
    EXPECT_EQ(back.seed, 77u);
    EXPECT_EQ(back.initial_edges, config.initial_edges);
    EXPECT_EQ(back.target.state.amplitudes, config.target.state.amplitudes);
    EXPECT_EQ(encode_search_template(back), text);
}

TEST(Template, UncoloredGeometryCollapsesModes) {
    ColoredGraph g({detector(0, 2), detector(1, 2)}, {Edge{0, 1, 0, 0, 1.0}, Edge{0, 1, 1, 1, 1.0}});
    auto c = make_search_config(g, bell_pair(2), TaskKind::generation, true);
    ASSERT_TRUE(c.initial_edges);
    ASSERT_EQ(c.initial_edges->size(), 1u);
    EXPECT_FALSE((*c.initial_edges)[0].colored());
}

TEST(Template, MissingTargetIsNamed) {
    SearchConfig c;
    c.name = "t";
    c.roster = {detector(0, 2), detector(1, 2)};
    c.target = bell_pair(2);
    auto text = encode_search_template(c);
    auto start = text.find("\"target\":");
    auto end = text.find("\"initial_edges\"");
    text.erase(start, end - start);
    try {
        decode_search_template(text);
        FAIL();
    } catch (const DecodeError &e) {
        EXPECT_EQ(e.where(), "target");
        EXPECT_NE(std::string(e.what()).find("target required"), std::string::npos);
    }
}

TEST(Result, RoundTrip) {
    SearchConfig c;
    c.roster = {detector(0, 2), detector(1, 2), detector(2, 2), detector(3, 2)};
    c.target = ghz_state(4, 2);
    c.seed = 4;
    auto r = discover(c);
    auto text = encode_search_result(r);
    auto back = decode_search_result(text);
    EXPECT_EQ(back.graph, r.graph);
    EXPECT_EQ(back.loss, r.loss);
    EXPECT_EQ(back.trace.size(), r.trace.size());
    EXPECT_EQ(encode_search_result(back), text);
}

TEST(StateDoc, RoundTripAndVanishing) {
    auto doc = state_document(sample());
    EXPECT_FALSE(doc.vanishing);
    auto text = encode_state(doc);
    EXPECT_EQ(encode_state(decode_state(text)), text);

    ColoredGraph sq({detector(0, 1), detector(1, 1), detector(2, 1), detector(3, 1)},
                    {Edge{0, 1, 0, 0, 1.0}, Edge{1, 2, 0, 0, 1.0}, Edge{2, 3, 0, 0, 1.0}, Edge{0, 3, 0, 0, -1.0}});
    auto gone = state_document(sq);
    EXPECT_TRUE(gone.vanishing);
    EXPECT_EQ(gone.norm, 0.0);
    EXPECT_TRUE(decode_state(encode_state(gone)).vanishing);
}

TEST(Reports, CarryFormatTags) {
    auto g = sample();
    EXPECT_NE(encode_matchings(g, {}).find("qgraph-matchings"), std::string::npos);
    Layout l{{{0, 0, 0}}, 0.0, {0.0}};
    EXPECT_NE(encode_layout(l).find("qgraph-layout"), std::string::npos);
}

}  // namespace
}  // namespace qgraph
