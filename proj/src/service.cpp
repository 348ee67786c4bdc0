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

#include "qgraph/service.hpp"

#include <functional>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "qgraph/discovery.hpp"
#include "qgraph/io.hpp"
#include "qgraph/jobs.hpp"
#include "qgraph/layout.hpp"
#include "qgraph/library.hpp"
#include "qgraph/matching.hpp"
#include "qgraph/targets.hpp"

namespace qgraph {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char *kJson = "application/json";

/// Graph invariant violations, answered with 422.
class Unprocessable : public std::runtime_error {
   public:
    Unprocessable(const std::string &what, ojson details = ojson::array())
        : std::runtime_error(what), details_(std::move(details)) {}
    const ojson &details() const { return details_; }

   private:
    ojson details_;
};

/// Bad query parameters or path segments, answered with 400.
class BadRequest : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

void reply(httplib::Response &res, int status, const ojson &body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", kJson);
}

void reply_error(httplib::Response &res, int status, const std::string &message, ojson extra = ojson::object()) {
    ojson body = ojson::object();
    body["error"] = message;
    for (auto &[k, v] : extra.items()) body[k] = v;
    reply(res, status, body);
}

using Handler = std::function<void(const httplib::Request &, httplib::Response &)>;

Handler guarded(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request &req, httplib::Response &res) {
        try {
            inner(req, res);
        } catch (const DecodeError &e) {
            reply_error(res, 400, e.what(), ojson{{"where", e.where()}});
        } catch (const BadRequest &e) {
            reply_error(res, 400, e.what());
        } catch (const Unprocessable &e) {
            reply_error(res, 422, e.what(), ojson{{"violations", e.details()}});
        } catch (const NotFound &e) {
            reply_error(res, 404, e.what());
        } catch (const std::exception &) {
            reply_error(res, 500, "internal error");
        }
    };
}

void require_valid_graph(const ColoredGraph &graph) {
    auto report = validate_graph(graph);
    if (report.ok()) return;
    ojson details = ojson::array();
    for (const auto &v : report.violations) details.push_back(v.message);
    throw Unprocessable("invalid graph", std::move(details));
}

/// Engine preconditions beyond graph validity (ancilla overflow, target shape) are 422 too.
template <typename F>
auto engine(F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument &e) {
        throw Unprocessable(e.what());
    }
}

std::string checked_name(const std::string &name) {
    if (!GraphLibrary::valid_name(name)) throw BadRequest("invalid graph name \"" + name + "\"");
    return name;
}

template <typename T>
T numeric_param(const httplib::Request &req, const char *key, T fallback) {
    if (!req.has_param(key)) return fallback;
    auto text = req.get_param_value(key);
    try {
        std::size_t used = 0;
        T value;
        if constexpr (std::is_floating_point_v<T>) {
            value = static_cast<T>(std::stod(text, &used));
        } else if constexpr (std::is_signed_v<T>) {
            value = static_cast<T>(std::stoll(text, &used));
        } else {
            if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
            value = static_cast<T>(std::stoull(text, &used));
        }
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception &) {
        throw BadRequest(std::string("bad value for parameter \"") + key + "\"");
    }
}

bool flag_param(const httplib::Request &req, const char *key) {
    if (!req.has_param(key)) return false;
    auto v = req.get_param_value(key);
    if (v == "1" || v == "true" || v.empty()) return true;
    if (v == "0" || v == "false") return false;
    throw BadRequest(std::string("bad value for parameter \"") + key + "\"");
}

ojson event_json(const JobEvent &e) {
    ojson o = ojson::object();
    o["seq"] = e.seq;
    o["kind"] = e.kind;
    o["loss"] = e.loss;
    o["edge_count"] = e.edge_count;
    o["restart"] = e.restart ? ojson(*e.restart) : ojson(nullptr);
    o["message"] = e.message;
    return o;
}

ojson snapshot_json(const JobSnapshot &s, bool with_result) {
    ojson o = ojson::object();
    o["id"] = s.id;
    o["state"] = std::string(job_state_name(s.state));
    o["name"] = s.name;
    o["phase"] = s.phase;
    o["loss"] = s.loss;
    o["edge_count"] = s.edge_count;
    o["event_count"] = s.event_count;
    o["error"] = s.error;
    if (with_result) {
        o["result"] = s.result ? ojson::parse(encode_search_result(*s.result)) : ojson(nullptr);
    }
    return o;
}

void send_document(httplib::Response &res, const std::string &text) {
    res.status = 200;
    res.set_content(text, kJson);
}

}  // namespace

struct Service::Impl {
    explicit Impl(const ServiceOptions &options)
        : library(options.library_dir), jobs(JobManager::Options{options.workers, options.job_ttl, options.job_log}) {}

    httplib::Server server;
    GraphLibrary library;
    JobManager jobs;
    std::thread thread;
    int port = -1;

    void state_of(const ColoredGraph &graph, httplib::Response &res) {
        require_valid_graph(graph);
        send_document(res, encode_state(engine([&] { return state_document(graph); })));
    }

    void matchings_of(const ColoredGraph &graph, const httplib::Request &req, httplib::Response &res) {
        require_valid_graph(graph);
        if (req.has_param("ket")) {
            Ket ket;
            try {
                ket = ket_from_string(req.get_param_value("ket"));
            } catch (const std::invalid_argument &e) {
                throw BadRequest(e.what());
            }
            send_document(res, encode_cancellations(engine([&] { return find_cancellations(graph, ket); })));
            return;
        }
        auto matchings = enumerate_perfect_matchings(graph);
        send_document(res, engine([&] { return encode_matchings(graph, matchings); }));
    }

    void layout_of(const ColoredGraph &graph, const httplib::Request &req, httplib::Response &res) {
        require_valid_graph(graph);
        if (graph.num_vertices() == 0) throw Unprocessable("graph has no vertices");
        LayoutSettings settings;
        settings.seed = numeric_param<std::uint64_t>(req, "seed", 0);
        send_document(res, encode_layout(kamada_kawai_3d(graph, settings)));
    }

    void routes() {
        server.Get("/api/health", guarded([](const httplib::Request &, httplib::Response &res) {
                       reply(res, 200, ojson{{"status", "ok"}});
                   }));

        server.Get("/api/graphs", guarded([this](const httplib::Request &, httplib::Response &res) {
                       ojson names = ojson::array();
                       for (auto &n : library.list()) names.push_back(n);
                       reply(res, 200, ojson{{"graphs", names}});
                   }));

        const std::string name_re = R"(/api/graphs/([^/]+))";

        server.Get(name_re, guarded([this](const httplib::Request &req, httplib::Response &res) {
                       send_document(res, library.load_text(checked_name(req.matches[1])));
                   }));

        server.Put(name_re, guarded([this](const httplib::Request &req, httplib::Response &res) {
                       auto name = checked_name(req.matches[1]);
                       auto doc = decode_graph(req.body);
                       require_valid_graph(doc.graph);
                       library.save(name, doc);
                       send_document(res, library.load_text(name));
                   }));

        server.Delete(name_re, guarded([this](const httplib::Request &req, httplib::Response &res) {
                          auto name = checked_name(req.matches[1]);
                          if (!library.remove(name)) throw NotFound("no graph named \"" + name + "\"");
                          reply(res, 200, ojson{{"deleted", name}});
                      }));

        server.Get(name_re + "/state", guarded([this](const httplib::Request &req, httplib::Response &res) {
                       state_of(library.load(checked_name(req.matches[1])).graph, res);
                   }));
        server.Get(name_re + "/matchings", guarded([this](const httplib::Request &req, httplib::Response &res) {
                       matchings_of(library.load(checked_name(req.matches[1])).graph, req, res);
                   }));
        server.Get(name_re + "/layout", guarded([this](const httplib::Request &req, httplib::Response &res) {
                       layout_of(library.load(checked_name(req.matches[1])).graph, req, res);
                   }));

        server.Get(name_re + "/template", guarded([this](const httplib::Request &req, httplib::Response &res) {
                       auto name = checked_name(req.matches[1]);
                       auto graph = library.load(name).graph;
                       if (!req.has_param("target")) throw BadRequest("parameter \"target\" required");
                       TargetState target;
                       try {
                           target = parse_target_spec(req.get_param_value("target"));
                       } catch (const std::invalid_argument &e) {
                           throw BadRequest(e.what());
                       }
                       auto task = TaskKind::generation;
                       if (req.has_param("task")) {
                           auto parsed = parse_task(req.get_param_value("task"));
                           if (!parsed) throw BadRequest("unknown task \"" + req.get_param_value("task") + "\"");
                           task = *parsed;
                       }
                       OptimizerSettings optimizer;
                       optimizer.restarts = numeric_param<int>(req, "restarts", optimizer.restarts);
                       PruneSettings pruning;
                       pruning.tau = numeric_param<double>(req, "tau", pruning.tau);
                       auto config = make_search_config(graph, target, task, flag_param(req, "uncolored"), optimizer,
                                                        pruning, numeric_param<std::uint64_t>(req, "seed", 1));
                       config.name = name;
                       engine([&] { validate_config(config); });
                       send_document(res, encode_search_template(config));
                   }));

        server.Post("/api/state", guarded([this](const httplib::Request &req, httplib::Response &res) {
                        state_of(decode_graph(req.body).graph, res);
                    }));
        server.Post("/api/matchings", guarded([this](const httplib::Request &req, httplib::Response &res) {
                        matchings_of(decode_graph(req.body).graph, req, res);
                    }));
        server.Post("/api/layout", guarded([this](const httplib::Request &req, httplib::Response &res) {
                        layout_of(decode_graph(req.body).graph, req, res);
                    }));

        server.Post("/api/jobs", guarded([this](const httplib::Request &req, httplib::Response &res) {
                        auto config = decode_search_template(req.body);
                        engine([&] { validate_config(config); });
                        auto id = jobs.submit(std::move(config));
                        reply(res, 202, ojson{{"id", id}});
                    }));

        server.Get("/api/jobs", guarded([this](const httplib::Request &, httplib::Response &res) {
                       ojson list = ojson::array();
                       for (auto &s : jobs.list()) list.push_back(snapshot_json(s, false));
                       reply(res, 200, ojson{{"jobs", list}});
                   }));

        const std::string job_re = R"(/api/jobs/([0-9a-f]+))";

        server.Get(job_re, guarded([this](const httplib::Request &req, httplib::Response &res) {
                       auto snap = jobs.get(req.matches[1]);
                       if (!snap) throw NotFound("no job " + std::string(req.matches[1]));
                       reply(res, 200, snapshot_json(*snap, true));
                   }));

        auto cancel = guarded([this](const httplib::Request &req, httplib::Response &res) {
            auto state = jobs.cancel(req.matches[1]);
            if (!state) throw NotFound("no job " + std::string(req.matches[1]));
            reply(res, 200, ojson{{"id", std::string(req.matches[1])}, {"state", std::string(job_state_name(*state))}});
        });
        server.Post(job_re + "/cancel", cancel);
        server.Delete(job_re, cancel);

        server.Get(job_re + "/events", guarded([this](const httplib::Request &req, httplib::Response &res) {
                       std::string id = req.matches[1];
                       if (!jobs.get(id)) throw NotFound("no job " + id);
                       auto next = std::make_shared<std::size_t>(numeric_param<std::size_t>(req, "from", 0));
                       res.set_header("Cache-Control", "no-cache");
                       res.set_chunked_content_provider(
                           "text/event-stream", [this, id, next](std::size_t, httplib::DataSink &sink) {
                               auto batch = jobs.events_since(id, *next, std::chrono::milliseconds(250));
                               if (!batch) {
                                   sink.done();
                                   return true;
                               }
                               for (const auto &e : batch->events) {
                                   std::string frame = "id: " + std::to_string(e.seq) + "\nevent: " + e.kind +
                                                       "\ndata: " + event_json(e).dump() + "\n\n";
                                   if (!sink.write(frame.data(), frame.size())) return false;
                                   *next = e.seq + 1;
                               }
                               if (batch->finished) sink.done();
                               return true;
                           });
                   }));
    }
};

Service::Service(ServiceOptions options) : options_(std::move(options)), impl_(std::make_unique<Impl>(options_)) {
    impl_->routes();
    if (options_.static_dir) impl_->server.set_mount_point("/", options_.static_dir->string());
}

Service::~Service() { stop(); }

int Service::bind() {
    if (options_.port == 0) {
        impl_->port = impl_->server.bind_to_any_port(options_.host);
    } else {
        impl_->port = impl_->server.bind_to_port(options_.host, options_.port) ? options_.port : -1;
    }
    return impl_->port;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

int Service::start() {
    int port = bind();
    if (port < 0) return -1;
    impl_->thread = std::thread([this] { listen(); });
    impl_->server.wait_until_ready();
    return port;
}

void Service::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace qgraph
