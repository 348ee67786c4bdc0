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

// Interchange documents. All of them are JSON objects tagged with a "format"
// key; encoders emit keys in a fixed order with two-space indentation and
// shortest round-trip number rendering, so encode(decode(x)) == x for any
// canonically encoded x and every double survives bit-exactly.
//
//   qgraph-graph     a graph, optional vertex positions, optional target kets
//   qgraph-template  a search instruction (roster, target, initial geometry, settings)
//   qgraph-result    a finished search (graph, loss, trace)
//   qgraph-state     a computed state (amplitudes per ket)
//
// Report formats (write-only): qgraph-matchings, qgraph-cancellations, qgraph-layout.

#ifndef QGRAPH_IO_HPP
#define QGRAPH_IO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgraph/discovery.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/kernels.hpp"
#include "qgraph/layout.hpp"
#include "qgraph/matching.hpp"
#include "qgraph/state.hpp"

namespace qgraph {

/// Parse or schema error. `where()` is either "line L, column C" (syntax) or a field path such as
/// "edges[3].cu" (schema).
class DecodeError : public std::runtime_error {
   public:
    DecodeError(std::string where, const std::string &what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string &where() const { return where_; }

   private:
    std::string where_;
};

using KetAmplitudes = std::vector<std::pair<Ket, Amplitude>>;

struct GraphDocument {
    ColoredGraph graph;
    std::optional<std::vector<Point3>> positions;
    std::optional<KetAmplitudes> target;
};

/// Decoding checks structure and types only; graph invariants are left to validate_graph.
std::string encode_graph(const GraphDocument &doc);
std::string encode_graph(const ColoredGraph &graph, const std::optional<std::vector<Point3>> &positions = std::nullopt);
GraphDocument decode_graph(std::string_view text);

/// A search config whose roster and initial geometry come from `graph`. Colored edges are kept
/// as-is unless `uncolored`, in which case every connected vertex pair becomes one uncolored entry.
SearchConfig make_search_config(const ColoredGraph &graph, const TargetState &target, TaskKind task = TaskKind::generation,
                                bool uncolored = false, const OptimizerSettings &optimizer = {},
                                const PruneSettings &pruning = {}, std::uint64_t seed = 1);

std::string encode_search_template(const SearchConfig &config);
/// Throws DecodeError for malformed documents ("target required" when the target is missing).
SearchConfig decode_search_template(std::string_view text);

std::string encode_search_result(const SearchResult &result);
SearchResult decode_search_result(std::string_view text);

struct StateDocument {
    std::vector<std::size_t> sites;
    QuantumState state;
    double norm = 0.0;
    bool vanishing = false;
};

/// `state` is written as given; callers normalize first when that is what they report.
std::string encode_state(const StateDocument &doc);
StateDocument decode_state(std::string_view text);

/// Normalized state document for `graph`; a vanishing state has no amplitudes and norm 0.
StateDocument state_document(const ColoredGraph &graph);

std::string encode_matchings(const ColoredGraph &graph, const std::vector<PerfectMatching> &matchings,
                             bool include_list = true);
std::string encode_cancellations(const CancellationReport &report);
std::string encode_layout(const Layout &layout);

}  // namespace qgraph

#endif
