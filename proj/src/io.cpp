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

#include "qgraph/io.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"

namespace qgraph {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr int kVersion = 1;

std::string dump(const ojson &doc) { return doc.dump(2) + "\n"; }

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

json parse_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        std::string what = e.what();
        // Drop nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix.
        auto colon = what.find(": ");
        throw DecodeError(line_column(text, e.byte > 0 ? e.byte - 1 : 0),
                          colon == std::string::npos ? what : what.substr(colon + 2));
    }
}

/// Typed access with field-path diagnostics.
class Field {
   public:
    Field(const json &value, std::string path) : value_(value), path_(std::move(path)) {}

    const json &raw() const { return value_; }
    const std::string &path() const { return path_; }

    [[noreturn]] void fail(const std::string &what) const { throw DecodeError(path_.empty() ? "document" : path_, what); }

    const Field &object() const {
        if (!value_.is_object()) fail("expected an object");
        return *this;
    }
    const Field &array() const {
        if (!value_.is_array()) fail("expected an array");
        return *this;
    }
    bool has(const char *key) const { return value_.is_object() && value_.contains(key) && !value_.at(key).is_null(); }
    Field at(const char *key) const {
        object();
        auto it = value_.find(key);
        if (it == value_.end()) throw DecodeError(child_path(key), "missing field");
        return Field(*it, child_path(key));
    }
    Field operator[](std::size_t i) const { return Field(value_.at(i), path_ + "[" + std::to_string(i) + "]"); }
    std::size_t size() const { return value_.size(); }

    std::size_t as_index() const {
        if (value_.is_number_unsigned()) {
            auto v = value_.get<std::uint64_t>();
            if (v > std::numeric_limits<std::size_t>::max() / 2) fail("index too large");
            return static_cast<std::size_t>(v);
        }
        if (value_.is_number_integer()) fail("expected a non-negative integer");
        fail("expected an integer");
    }
    int as_int() const {
        if (!value_.is_number_integer()) fail("expected an integer");
        if (value_.is_number_unsigned()) {
            auto v = value_.get<std::uint64_t>();
            if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) fail("integer out of range");
            return static_cast<int>(v);
        }
        auto v = value_.get<std::int64_t>();
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("integer out of range");
        return static_cast<int>(v);
    }
    std::uint64_t as_u64() const {
        if (!value_.is_number_unsigned()) fail("expected a non-negative integer");
        return value_.get<std::uint64_t>();
    }
    double as_double() const {
        if (!value_.is_number()) fail("expected a number");
        return value_.get<double>();
    }
    bool as_bool() const {
        if (!value_.is_boolean()) fail("expected a boolean");
        return value_.get<bool>();
    }
    std::string as_string() const {
        if (!value_.is_string()) fail("expected a string");
        return value_.get<std::string>();
    }

   private:
    std::string child_path(const char *key) const { return path_.empty() ? key : path_ + "." + key; }

    const json &value_;
    std::string path_;
};

void expect_format(const Field &root, const char *format) {
    root.object();
    auto f = root.at("format").as_string();
    if (f != format) root.at("format").fail("expected \"" + std::string(format) + "\", got \"" + f + "\"");
    int version = root.at("version").as_int();
    if (version != kVersion) root.at("version").fail("unsupported version " + std::to_string(version));
}

ojson encode_amplitude(Amplitude a) {
    ojson o = ojson::object();
    o["re"] = a.real();
    o["im"] = a.imag();
    return o;
}

Amplitude decode_amplitude(const Field &f) {
    f.object();
    return {f.at("re").as_double(), f.at("im").as_double()};
}

ojson encode_kets(const KetAmplitudes &kets) {
    ojson arr = ojson::array();
    for (const auto &[ket, amp] : kets) {
        ojson o = ojson::object();
        o["ket"] = ket_to_string(ket);
        o["amplitude"] = encode_amplitude(amp);
        arr.push_back(std::move(o));
    }
    return arr;
}

KetAmplitudes decode_kets(const Field &f) {
    f.array();
    KetAmplitudes out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto entry = f[i];
        entry.object();
        auto ket_field = entry.at("ket");
        Ket ket;
        try {
            ket = ket_from_string(ket_field.as_string());
        } catch (const std::invalid_argument &e) {
            ket_field.fail(e.what());
        }
        out.emplace_back(std::move(ket), decode_amplitude(entry.at("amplitude")));
    }
    return out;
}

KetAmplitudes kets_of(const QuantumState &state) {
    KetAmplitudes out(state.amplitudes.begin(), state.amplitudes.end());
    return out;
}

ojson encode_vertex(const Vertex &v, const Point3 *position) {
    ojson o = ojson::object();
    o["id"] = v.id;
    o["role"] = std::string(role_name(v.role));
    o["dimension"] = v.dimension;
    if (position) o["position"] = ojson::array({(*position)[0], (*position)[1], (*position)[2]});
    return o;
}

Vertex decode_vertex(const Field &f) {
    f.object();
    Vertex v;
    v.id = f.at("id").as_index();
    auto role_field = f.at("role");
    auto role = parse_role(role_field.as_string());
    if (!role) role_field.fail("unknown role \"" + role_field.as_string() + "\"");
    v.role = *role;
    v.dimension = f.at("dimension").as_int();
    return v;
}

ojson encode_edge_record(const Edge &e) {
    ojson o = ojson::object();
    o["u"] = e.u;
    o["v"] = e.v;
    o["cu"] = e.cu;
    o["cv"] = e.cv;
    o["weight"] = encode_amplitude(e.weight);
    return o;
}

Edge decode_edge_record(const Field &f) {
    f.object();
    Edge e;
    e.u = f.at("u").as_index();
    e.v = f.at("v").as_index();
    e.cu = f.at("cu").as_int();
    e.cv = f.at("cv").as_int();
    e.weight = decode_amplitude(f.at("weight"));
    return e;
}

ojson graph_object(const GraphDocument &doc) {
    const auto &g = doc.graph;
    if (doc.positions && doc.positions->size() != g.num_vertices()) {
        throw std::invalid_argument("encode_graph: position count does not match vertex count");
    }
    std::vector<Vertex> vertices = g.vertices();
    std::vector<std::size_t> order(vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vertices[a].id < vertices[b].id; });

    ojson o = ojson::object();
    o["format"] = "qgraph-graph";
    o["version"] = kVersion;
    o["name"] = g.name();
    ojson vs = ojson::array();
    for (auto i : order) vs.push_back(encode_vertex(vertices[i], doc.positions ? &(*doc.positions)[i] : nullptr));
    o["vertices"] = std::move(vs);
    ojson es = ojson::array();
    for (const auto &e : g.edges()) es.push_back(encode_edge_record(e));
    o["edges"] = std::move(es);
    if (doc.target) o["target"] = encode_kets(*doc.target);
    return o;
}

GraphDocument graph_from(const Field &root) {
    expect_format(root, "qgraph-graph");
    GraphDocument doc;
    std::string name = root.has("name") ? root.at("name").as_string() : std::string();

    auto vf = root.at("vertices");
    vf.array();
    std::vector<Vertex> vertices;
    std::vector<Point3> positions;
    std::size_t with_position = 0;
    for (std::size_t i = 0; i < vf.size(); ++i) {
        auto f = vf[i];
        vertices.push_back(decode_vertex(f));
        if (f.has("position")) {
            auto p = f.at("position");
            p.array();
            if (p.size() != 3) p.fail("expected [x, y, z]");
            Point3 xyz{p[0].as_double(), p[1].as_double(), p[2].as_double()};
            for (double c : xyz) {
                if (!std::isfinite(c)) p.fail("coordinates must be finite");
            }
            positions.push_back(xyz);
            ++with_position;
        } else {
            positions.push_back({0.0, 0.0, 0.0});
        }
    }
    if (with_position != 0 && with_position != vertices.size()) {
        vf.fail("either every vertex or no vertex carries a position");
    }

    auto ef = root.at("edges");
    ef.array();
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < ef.size(); ++i) edges.push_back(decode_edge_record(ef[i]));

    // Positions follow vertex ids when the ids are a permutation of 0..V-1, else document order.
    std::vector<std::size_t> order(vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vertices[a].id < vertices[b].id; });
    std::vector<Vertex> sorted_vertices;
    std::vector<Point3> sorted_positions;
    for (auto i : order) {
        sorted_vertices.push_back(vertices[i]);
        sorted_positions.push_back(positions[i]);
    }

    doc.graph = ColoredGraph(std::move(sorted_vertices), std::move(edges), std::move(name));
    if (with_position) doc.positions = std::move(sorted_positions);
    if (root.has("target")) doc.target = decode_kets(root.at("target"));
    return doc;
}

/// Dims of the ket sites the task reads, from a roster.
std::vector<int> site_dims(const std::vector<Vertex> &roster, TaskKind task) {
    std::vector<int> dims;
    for (const auto &v : roster) {
        bool site = task == TaskKind::analyzer ? v.role == VertexRole::input : v.role != VertexRole::ancilla;
        if (site) dims.push_back(v.dimension);
    }
    return dims;
}

ojson encode_geometry_edge(const GeometryEdge &g) {
    ojson a = ojson::array({g.u, g.v});
    if (g.colored()) {
        a.push_back(*g.cu);
        a.push_back(*g.cv);
    }
    return a;
}

GeometryEdge decode_geometry_edge(const Field &f) {
    f.array();
    if (f.size() != 2 && f.size() != 4) f.fail("expected [u, v] or [u, v, cu, cv]");
    GeometryEdge g;
    g.u = f[0].as_index();
    g.v = f[1].as_index();
    if (f.size() == 4) {
        g.cu = f[2].as_int();
        g.cv = f[3].as_int();
    }
    return g;
}

ojson result_object(const SearchResult &r) {
    ojson o = ojson::object();
    o["format"] = "qgraph-result";
    o["version"] = kVersion;
    o["loss"] = r.loss;
    o["feasible"] = r.feasible;
    o["edges_removed"] = r.edges_removed;
    o["seed"] = r.seed;
    o["initial_iterations"] = r.initial_iterations;
    o["total_iterations"] = r.total_iterations;
    ojson trace = ojson::array();
    for (const auto &t : r.trace) {
        ojson e = ojson::object();
        e["edge_count"] = t.edge_count;
        e["loss"] = t.loss;
        if (t.removed) {
            e["removed"] = ojson::array({t.removed->u, t.removed->v, t.removed->cu, t.removed->cv});
        } else {
            e["removed"] = nullptr;
        }
        trace.push_back(std::move(e));
    }
    o["trace"] = std::move(trace);
    o["graph"] = graph_object(GraphDocument{r.graph, std::nullopt, std::nullopt});
    return o;
}

template <typename Fn>
auto guarded(Fn &&fn) {
    try {
        return fn();
    } catch (const DecodeError &) {
        throw;
    } catch (const nlohmann::json::exception &e) {
        throw DecodeError("document", e.what());
    }
}

}  // namespace

std::string encode_graph(const GraphDocument &doc) { return dump(graph_object(doc)); }

std::string encode_graph(const ColoredGraph &graph, const std::optional<std::vector<Point3>> &positions) {
    return encode_graph(GraphDocument{graph, positions, std::nullopt});
}

GraphDocument decode_graph(std::string_view text) {
    return guarded([&] {
        auto j = parse_text(text);
        return graph_from(Field(j, ""));
    });
}

SearchConfig make_search_config(const ColoredGraph &graph, const TargetState &target, TaskKind task, bool uncolored,
                                const OptimizerSettings &optimizer, const PruneSettings &pruning, std::uint64_t seed) {
    SearchConfig c;
    c.name = graph.name();
    c.roster = graph.vertices();
    c.task = task;
    c.target = target;
    c.optimizer = optimizer;
    c.pruning = pruning;
    c.seed = seed;
    std::vector<GeometryEdge> geometry;
    if (uncolored) {
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto &e : graph.edges()) pairs.insert({e.u, e.v});
        for (auto [u, v] : pairs) geometry.push_back(GeometryEdge{u, v, std::nullopt, std::nullopt});
    } else {
        for (const auto &e : graph.edges()) geometry.push_back(GeometryEdge{e.u, e.v, e.cu, e.cv});
    }
    c.initial_edges = std::move(geometry);
    return c;
}

std::string encode_search_template(const SearchConfig &config) {
    ojson o = ojson::object();
    o["format"] = "qgraph-template";
    o["version"] = kVersion;
    o["name"] = config.name;
    o["task"] = std::string(task_name(config.task));
    ojson vs = ojson::array();
    for (const auto &v : config.roster) vs.push_back(encode_vertex(v, nullptr));
    o["vertices"] = std::move(vs);
    o["target_label"] = config.target.label;
    o["target"] = encode_kets(kets_of(config.target.state));
    if (config.initial_edges) {
        ojson es = ojson::array();
        for (const auto &g : *config.initial_edges) es.push_back(encode_geometry_edge(g));
        o["initial_edges"] = std::move(es);
    } else {
        o["initial_edges"] = nullptr;
    }
    ojson opt = ojson::object();
    opt["max_iterations"] = config.optimizer.max_iterations;
    opt["restarts"] = config.optimizer.restarts;
    opt["gradient_tolerance"] = config.optimizer.gradient_tolerance;
    opt["loss_tolerance"] = config.optimizer.loss_tolerance;
    opt["initial_step"] = config.optimizer.initial_step;
    o["optimizer"] = std::move(opt);
    ojson pr = ojson::object();
    pr["tau"] = config.pruning.tau;
    o["pruning"] = std::move(pr);
    o["seed"] = config.seed;
    return dump(o);
}

SearchConfig decode_search_template(std::string_view text) {
    return guarded([&] {
        auto j = parse_text(text);
        Field root(j, "");
        expect_format(root, "qgraph-template");
        SearchConfig c;
        if (root.has("name")) c.name = root.at("name").as_string();
        if (root.has("task")) {
            auto tf = root.at("task");
            auto task = parse_task(tf.as_string());
            if (!task) tf.fail("unknown task \"" + tf.as_string() + "\"");
            c.task = *task;
        }
        auto vf = root.at("vertices");
        vf.array();
        for (std::size_t i = 0; i < vf.size(); ++i) {
            c.roster.push_back(decode_vertex(vf[i]));
            if (c.roster.back().id != i) vf[i].at("id").fail("roster ids must be 0..V-1 in order");
            if (c.roster.back().dimension < 1) vf[i].at("dimension").fail("dimension must be >= 1");
        }

        if (!root.has("target")) throw DecodeError("target", "target required");
        auto tf = root.at("target");
        auto kets = decode_kets(tf);
        if (kets.empty()) tf.fail("target required");
        QuantumState state(site_dims(c.roster, c.task));
        for (std::size_t i = 0; i < kets.size(); ++i) {
            if (!state.fits(kets[i].first)) {
                tf[i].at("ket").fail("ket does not match the roster's " + std::to_string(state.num_sites()) + " ket sites");
            }
            state.add(kets[i].first, kets[i].second);
        }
        double n2 = state.norm_squared();
        if (!(n2 > 0.0)) tf.fail("target has zero norm");
        std::string label = root.has("target_label") ? root.at("target_label").as_string() : std::string("custom");
        // Already-normalized targets are kept bit-exact.
        c.target = std::abs(n2 - 1.0) <= kAmplitudeTolerance ? TargetState{std::move(state), label}
                                                             : TargetState::from_state(state, label);

        if (root.has("initial_edges")) {
            auto ef = root.at("initial_edges");
            ef.array();
            std::vector<GeometryEdge> geometry;
            for (std::size_t i = 0; i < ef.size(); ++i) geometry.push_back(decode_geometry_edge(ef[i]));
            c.initial_edges = std::move(geometry);
        }
        if (root.has("optimizer")) {
            auto of = root.at("optimizer");
            of.object();
            if (of.has("max_iterations")) c.optimizer.max_iterations = of.at("max_iterations").as_int();
            if (of.has("restarts")) c.optimizer.restarts = of.at("restarts").as_int();
            if (of.has("gradient_tolerance")) c.optimizer.gradient_tolerance = of.at("gradient_tolerance").as_double();
            if (of.has("loss_tolerance")) c.optimizer.loss_tolerance = of.at("loss_tolerance").as_double();
            if (of.has("initial_step")) c.optimizer.initial_step = of.at("initial_step").as_double();
        }
        if (root.has("pruning")) {
            auto pf = root.at("pruning");
            pf.object();
            if (pf.has("tau")) c.pruning.tau = pf.at("tau").as_double();
        }
        if (root.has("seed")) c.seed = root.at("seed").as_u64();
        return c;
    });
}

std::string encode_search_result(const SearchResult &result) { return dump(result_object(result)); }

SearchResult decode_search_result(std::string_view text) {
    return guarded([&] {
        auto j = parse_text(text);
        Field root(j, "");
        expect_format(root, "qgraph-result");
        SearchResult r;
        r.loss = root.at("loss").as_double();
        r.feasible = root.at("feasible").as_bool();
        r.edges_removed = root.at("edges_removed").as_index();
        r.seed = root.at("seed").as_u64();
        r.initial_iterations = root.at("initial_iterations").as_index();
        r.total_iterations = root.at("total_iterations").as_index();
        auto tf = root.at("trace");
        tf.array();
        for (std::size_t i = 0; i < tf.size(); ++i) {
            auto e = tf[i];
            TraceEntry t;
            t.edge_count = e.at("edge_count").as_index();
            t.loss = e.at("loss").as_double();
            if (e.has("removed")) {
                auto rf = e.at("removed");
                rf.array();
                if (rf.size() != 4) rf.fail("expected [u, v, cu, cv]");
                t.removed = Edge{rf[0].as_index(), rf[1].as_index(), rf[2].as_int(), rf[3].as_int(), {}};
            }
            r.trace.push_back(t);
        }
        r.graph = graph_from(root.at("graph")).graph;
        return r;
    });
}

std::string encode_state(const StateDocument &doc) {
    ojson o = ojson::object();
    o["format"] = "qgraph-state";
    o["version"] = kVersion;
    o["sites"] = doc.sites;
    o["dims"] = doc.state.dims;
    o["norm"] = doc.norm;
    o["vanishing"] = doc.vanishing;
    o["amplitudes"] = encode_kets(kets_of(doc.state));
    return dump(o);
}

StateDocument decode_state(std::string_view text) {
    return guarded([&] {
        auto j = parse_text(text);
        Field root(j, "");
        expect_format(root, "qgraph-state");
        StateDocument doc;
        auto sf = root.at("sites");
        sf.array();
        for (std::size_t i = 0; i < sf.size(); ++i) doc.sites.push_back(sf[i].as_index());
        auto df = root.at("dims");
        df.array();
        std::vector<int> dims;
        for (std::size_t i = 0; i < df.size(); ++i) dims.push_back(df[i].as_int());
        doc.state = QuantumState(std::move(dims));
        doc.norm = root.at("norm").as_double();
        doc.vanishing = root.at("vanishing").as_bool();
        auto af = root.at("amplitudes");
        auto kets = decode_kets(af);
        for (std::size_t i = 0; i < kets.size(); ++i) {
            if (!doc.state.fits(kets[i].first)) af[i].at("ket").fail("ket does not fit dims");
            doc.state.set(kets[i].first, kets[i].second);
        }
        return doc;
    });
}

StateDocument state_document(const ColoredGraph &graph) {
    StateDocument doc;
    doc.sites = ket_sites(graph);
    auto state = compute_state(graph);
    double n2 = state.norm_squared();
    doc.norm = std::sqrt(n2);
    if (n2 > 0.0) {
        doc.state = normalize_state(state);
    } else {
        doc.state = QuantumState(state.dims);
        doc.vanishing = true;
    }
    return doc;
}

namespace {

ojson index_array(const std::vector<std::size_t> &xs) {
    ojson a = ojson::array();
    for (auto x : xs) a.push_back(x);
    return a;
}

}  // namespace

std::string encode_matchings(const ColoredGraph &graph, const std::vector<PerfectMatching> &matchings,
                             bool include_list) {
    ojson o = ojson::object();
    o["format"] = "qgraph-matchings";
    o["version"] = kVersion;
    o["count"] = matchings.size();
    if (include_list) {
        auto sites = ket_sites(graph);
        ojson list = ojson::array();
        for (const auto &pm : matchings) {
            ojson m = ojson::object();
            m["edges"] = index_array(pm.edges);
            m["ket"] = ket_to_string(matching_ket(graph, pm, sites));
            m["amplitude"] = encode_amplitude(matching_amplitude(graph, pm));
            list.push_back(std::move(m));
        }
        o["matchings"] = std::move(list);
    }
    return dump(o);
}

std::string encode_cancellations(const CancellationReport &report) {
    ojson o = ojson::object();
    o["format"] = "qgraph-cancellations";
    o["version"] = kVersion;
    o["ket"] = ket_to_string(report.ket);
    o["net"] = encode_amplitude(report.net);
    o["cancelled"] = report.cancelled();
    ojson contributions = ojson::array();
    for (const auto &c : report.contributions) {
        ojson e = ojson::object();
        e["edges"] = index_array(c.matching.edges);
        e["amplitude"] = encode_amplitude(c.amplitude);
        contributions.push_back(std::move(e));
    }
    o["contributions"] = std::move(contributions);
    ojson opposing = ojson::array();
    for (const auto &p : report.opposing) {
        ojson e = ojson::object();
        e["first"] = p.first;
        e["second"] = p.second;
        ojson loops = ojson::array();
        for (const auto &cycle : p.loops) {
            ojson l = ojson::object();
            l["vertices"] = index_array(cycle.vertices);
            l["edges"] = index_array(cycle.edges);
            loops.push_back(std::move(l));
        }
        e["loops"] = std::move(loops);
        opposing.push_back(std::move(e));
    }
    o["opposing"] = std::move(opposing);
    return dump(o);
}

std::string encode_layout(const Layout &layout) {
    ojson o = ojson::object();
    o["format"] = "qgraph-layout";
    o["version"] = kVersion;
    ojson positions = ojson::array();
    for (const auto &p : layout.positions) positions.push_back(ojson::array({p[0], p[1], p[2]}));
    o["positions"] = std::move(positions);
    o["stress"] = layout.stress;
    o["sweeps"] = layout.stress_trace.empty() ? 0 : layout.stress_trace.size() - 1;
    return dump(o);
}

}  // namespace qgraph
