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

// Local HTTP API over the engine. Resources:
//
//   GET    /api/health
//   GET    /api/graphs                          sorted names
//   GET    /api/graphs/{name}                   graph document
//   PUT    /api/graphs/{name}                   store (validated, canonicalized)
//   DELETE /api/graphs/{name}
//   GET    /api/graphs/{name}/state             normalized state document
//   GET    /api/graphs/{name}/matchings[?ket=k] matchings with amplitudes (+ cancellation report)
//   GET    /api/graphs/{name}/layout[?seed=s]   positions + stress
//   GET    /api/graphs/{name}/template?target=ghz:n,d[&task=..&uncolored=1&seed=..&tau=..&restarts=..]
//   POST   /api/state | /api/matchings | /api/layout   same, graph document in the body
//   POST   /api/jobs                            template document -> {"id": ...}
//   GET    /api/jobs, /api/jobs/{id}            status (result document once done)
//   GET    /api/jobs/{id}/events[?from=n]       text/event-stream, replayable from any offset
//   POST   /api/jobs/{id}/cancel, DELETE /api/jobs/{id}
//
// Malformed documents answer 400, invariant violations 422, unknown names or ids 404, engine
// faults 500 with a generic message.

#ifndef QGRAPH_SERVICE_HPP
#define QGRAPH_SERVICE_HPP

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace qgraph {

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path library_dir = "library";
    std::size_t workers = 0;  // 0: hardware concurrency
    std::chrono::seconds job_ttl{24 * 3600};
    std::optional<std::filesystem::path> job_log;
    /// Served at "/" when set (the browser client's build output).
    std::optional<std::filesystem::path> static_dir;
};

class Service {
   public:
    explicit Service(ServiceOptions options);
    ~Service();
    Service(const Service &) = delete;
    Service &operator=(const Service &) = delete;

    /// Binds the listening socket; port 0 picks a free port. Returns the bound port or -1.
    int bind();
    /// Serves until stop(); requires a successful bind().
    bool listen();
    /// bind() + listen() on a background thread; returns the port or -1.
    int start();
    void stop();

    const ServiceOptions &options() const { return options_; }

   private:
    struct Impl;
    ServiceOptions options_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qgraph

#endif
