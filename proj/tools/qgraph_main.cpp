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

// Command-line front end. Documents go to stdout (or -o), diagnostics to stderr.
//
// Exit codes: 0 ok, 1 usage, 2 malformed document, 3 invalid graph / analyzer,
// 4 search found no solution at the threshold, 5 I/O failure, 6 internal error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qgraph/discovery.hpp"
#include "qgraph/io.hpp"
#include "qgraph/layout.hpp"
#include "qgraph/matching.hpp"
#include "qgraph/service.hpp"
#include "qgraph/targets.hpp"

namespace {

using namespace qgraph;

enum Exit { ok = 0, usage = 1, malformed = 2, invalid = 3, infeasible = 4, io_failure = 5, internal = 6 };

struct Failure {
    Exit code;
    std::string message;
};

std::string read_input(const std::string &path) {
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{io_failure, "cannot read " + path};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw Failure{io_failure, "cannot write to stdout"};
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw Failure{io_failure, "cannot write " + path};
}

ColoredGraph load_valid_graph(const std::string &path) {
    auto graph = decode_graph(read_input(path)).graph;
    auto report = validate_graph(graph);
    if (!report.ok()) throw Failure{invalid, report.summary()};
    return graph;
}

TargetState target_from(const std::string &spec) {
    try {
        return parse_target_spec(spec);
    } catch (const std::invalid_argument &e) {
        throw Failure{usage, e.what()};
    }
}

std::string format_amplitude(Amplitude a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%+.9g%+.9gi", a.real(), a.imag());
    return buf;
}

std::string format_edge(const Edge &e) {
    std::ostringstream s;
    s << "(" << e.u << "," << e.v << "," << e.cu << "," << e.cv << ") w=" << format_amplitude(e.weight);
    return s.str();
}

std::atomic<bool> interrupted{false};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Colored-graph quantum experiment design"};
    app.require_subcommand(1);

    std::string input, output, target_spec, task_name_arg = "generation", ket_text;
    bool json = false, list = false, uncolored = false;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> seed_override;
    std::optional<double> tau_override;
    std::optional<int> restarts_override;
    double tol = 1e-6;

    auto *validate = app.add_subcommand("validate", "Check graph invariants");
    validate->add_option("graph", input, "Graph document ('-' for stdin)")->required();

    auto *state = app.add_subcommand("state", "Print the normalized state a graph produces");
    state->add_option("graph", input)->required();
    state->add_flag("--json", json, "Emit a state document");

    auto *matchings = app.add_subcommand("matchings", "Count (or list) perfect matchings");
    matchings->add_option("graph", input)->required();
    matchings->add_flag("--list", list, "List every matching");
    matchings->add_flag("--json", json, "Emit a matchings report");

    auto *cancel = app.add_subcommand("cancellations", "Explain interference on one ket");
    cancel->add_option("graph", input)->required();
    cancel->add_option("--ket", ket_text, "Ket string, e.g. 0000")->required();
    cancel->add_flag("--json", json, "Emit a cancellations report");

    auto *layout = app.add_subcommand("layout", "Compute 3D positions and store them in the graph document");
    layout->add_option("graph", input)->required();
    layout->add_option("-o,--output", output, "Output path (default stdout)");
    layout->add_option("--seed", seed, "Layout seed");

    auto *disc = app.add_subcommand("discover", "Run a search template");
    disc->add_option("template", input)->required();
    disc->add_option("-o,--output", output, "Result document path (default stdout)");
    disc->add_option("--seed", seed_override, "Override the template seed");
    disc->add_option("--tau", tau_override, "Override the pruning threshold");
    disc->add_option("--restarts", restarts_override, "Override the number of restarts");

    auto *tmpl = app.add_subcommand("template", "Write a search template from a graph");
    tmpl->add_option("graph", input)->required();
    tmpl->add_option("--target", target_spec, "ghz:n,d | bell:d | swap:n,d")->required();
    tmpl->add_option("--task", task_name_arg, "generation | analyzer");
    tmpl->add_flag("--uncolored", uncolored, "Use the graph's vertex pairs as an uncolored geometry");
    tmpl->add_option("--seed", seed_override, "Search seed");
    tmpl->add_option("-o,--output", output, "Output path (default stdout)");

    auto *verify = app.add_subcommand("verify-analyzer", "Check an analyzer graph against a target");
    verify->add_option("graph", input)->required();
    verify->add_option("--target", target_spec)->required();
    verify->add_option("--tol", tol, "Per-ket tolerance");

    ServiceOptions service_options;
    std::string library_dir = service_options.library_dir.string(), static_dir, job_log;
    long long ttl_seconds = service_options.job_ttl.count();
    auto *serve = app.add_subcommand("serve", "Run the local HTTP API");
    serve->add_option("--host", service_options.host);
    serve->add_option("--port", service_options.port);
    serve->add_option("--library", library_dir, "Graph library directory");
    serve->add_option("--workers", service_options.workers, "Search worker threads (0: one per core)");
    serve->add_option("--ttl", ttl_seconds, "Seconds to keep finished jobs");
    serve->add_option("--static", static_dir, "Directory served at /");
    serve->add_option("--job-log", job_log, "Append finished jobs to this JSON-lines file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*validate) {
            auto graph = decode_graph(read_input(input)).graph;
            auto report = validate_graph(graph);
            if (!report.ok()) {
                std::cerr << report.summary() << "\n";
                return invalid;
            }
            std::cout << "ok: " << graph.num_vertices() << " vertices, " << graph.num_edges() << " edges\n";
        } else if (*state) {
            auto doc = state_document(load_valid_graph(input));
            if (json) {
                write_output("", encode_state(doc));
            } else if (doc.vanishing) {
                std::cout << "state vanishes (no perfect matching survives)\n";
            } else {
                for (const auto &[ket, amp] : doc.state.amplitudes)
                    std::cout << "|" << ket_to_string(ket) << ">  " << format_amplitude(amp) << "\n";
            }
        } else if (*matchings) {
            auto graph = load_valid_graph(input);
            auto pms = enumerate_perfect_matchings(graph);
            if (json) {
                write_output("", encode_matchings(graph, pms, list));
            } else {
                std::cout << pms.size() << "\n";
                if (list) {
                    auto sites = ket_sites(graph);
                    for (const auto &pm : pms) {
                        std::cout << "|" << ket_to_string(matching_ket(graph, pm, sites)) << ">  "
                                  << format_amplitude(matching_amplitude(graph, pm)) << "  edges";
                        for (auto e : pm.edges) std::cout << " " << e;
                        std::cout << "\n";
                    }
                }
            }
        } else if (*cancel) {
            auto graph = load_valid_graph(input);
            Ket ket;
            try {
                ket = ket_from_string(ket_text);
            } catch (const std::invalid_argument &e) {
                throw Failure{usage, e.what()};
            }
            auto report = find_cancellations(graph, ket);
            if (json) {
                write_output("", encode_cancellations(report));
            } else {
                std::cout << "ket " << ket_text << ": " << report.contributions.size() << " matchings, net "
                          << format_amplitude(report.net) << (report.cancelled() ? " (cancelled)" : "") << "\n";
                for (const auto &p : report.opposing) {
                    std::cout << "  opposing " << p.first << " vs " << p.second << ":";
                    for (const auto &c : p.loops) {
                        std::cout << " cycle";
                        for (auto v : c.vertices) std::cout << " " << v;
                    }
                    std::cout << "\n";
                }
            }
        } else if (*layout) {
            auto doc = decode_graph(read_input(input));
            auto report = validate_graph(doc.graph);
            if (!report.ok()) throw Failure{invalid, report.summary()};
            LayoutSettings settings;
            settings.seed = seed;
            auto result = kamada_kawai_3d(doc.graph, settings);
            doc.positions = result.positions;
            write_output(output, encode_graph(doc));
            std::cerr << "stress " << result.stress << " after " << result.stress_trace.size() - 1 << " sweeps\n";
        } else if (*disc) {
            auto config = decode_search_template(read_input(input));
            if (seed_override) config.seed = *seed_override;
            if (tau_override) config.pruning.tau = *tau_override;
            if (restarts_override) config.optimizer.restarts = *restarts_override;
            try {
                validate_config(config);
            } catch (const std::invalid_argument &e) {
                throw Failure{invalid, e.what()};
            }
            std::signal(SIGINT, [](int) { interrupted = true; });
            SearchHooks hooks;
            hooks.cancel = &interrupted;
            hooks.on_progress = [](const ProgressEvent &p) {
                if (p.kind == "restart") return;
                std::cerr << p.kind << ": loss " << p.loss << ", " << p.edge_count << " edges\n";
            };
            SearchResult result;
            try {
                result = discover(config, hooks);
            } catch (const SearchCancelled &) {
                throw Failure{internal, "interrupted"};
            }
            write_output(output, encode_search_result(result));
            for (const auto &e : result.graph.edges()) std::cerr << "  " << format_edge(e) << "\n";
            if (!result.feasible) {
                std::cerr << "no solution at threshold " << config.pruning.tau << " (best loss " << result.loss << ")\n";
                return infeasible;
            }
        } else if (*tmpl) {
            auto graph = load_valid_graph(input);
            auto task = parse_task(task_name_arg);
            if (!task) throw Failure{usage, "unknown task \"" + task_name_arg + "\""};
            auto config = make_search_config(graph, target_from(target_spec), *task, uncolored, {}, {},
                                             seed_override.value_or(1));
            try {
                validate_config(config);
            } catch (const std::invalid_argument &e) {
                throw Failure{invalid, e.what()};
            }
            write_output(output, encode_search_template(config));
        } else if (*verify) {
            auto graph = load_valid_graph(input);
            auto report = verify_analyzer(graph, target_from(target_spec), tol);
            std::cout << (report.is_valid ? "valid" : "invalid") << " factor " << format_amplitude(report.factor) << "\n";
            for (const auto &k : report.offending) std::cout << "  offending |" << ket_to_string(k) << ">\n";
            if (!report.is_valid) return invalid;
        } else if (*serve) {
            service_options.library_dir = library_dir;
            service_options.job_ttl = std::chrono::seconds(ttl_seconds);
            if (!static_dir.empty()) service_options.static_dir = static_dir;
            if (!job_log.empty()) service_options.job_log = job_log;
            Service service(service_options);
            int port = service.bind();
            if (port < 0) throw Failure{io_failure, "cannot bind " + service_options.host + ":" +
                                                        std::to_string(service_options.port)};
            std::cerr << "listening on http://" << service_options.host << ":" << port << "\n";
            if (!service.listen()) return io_failure;
        }
    } catch (const Failure &f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const DecodeError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return malformed;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return internal;
    }
    return ok;
}
