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

#include "qgraph/jobs.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <random>

#include "json.hpp"

namespace qgraph {

using Clock = std::chrono::steady_clock;

struct JobManager::Job {
    std::string id;
    SearchConfig config;

    std::mutex mutex;
    std::condition_variable changed;
    JobState state = JobState::queued;
    std::vector<JobEvent> events;
    std::string phase;
    double loss = 1.0;
    std::size_t edge_count = 0;
    std::optional<SearchResult> result;
    std::string error;
    std::optional<Clock::time_point> finished_at;
    std::atomic<bool> cancel{false};

    // Callers hold `mutex`.
    void push(JobEvent e) {
        e.seq = events.size();
        if (e.kind == "optimizing" || e.kind == "pruning" || e.kind == "done") phase = e.kind;
        loss = e.loss;
        edge_count = e.edge_count;
        events.push_back(std::move(e));
        changed.notify_all();
    }

    void finish(JobState terminal, const std::string &message) {
        state = terminal;
        finished_at = Clock::now();
        JobEvent e;
        e.kind = std::string(job_state_name(terminal));
        e.loss = result ? result->loss : loss;
        e.edge_count = result ? result->graph.num_edges() : edge_count;
        e.message = message;
        push(std::move(e));
    }

    JobSnapshot snapshot() const {
        JobSnapshot s;
        s.id = id;
        s.state = state;
        s.name = config.name;
        s.phase = phase;
        s.loss = loss;
        s.edge_count = edge_count;
        s.event_count = events.size();
        s.result = result;
        s.error = error;
        return s;
    }
};

std::string_view job_state_name(JobState state) {
    switch (state) {
        case JobState::queued:
            return "queued";
        case JobState::running:
            return "running";
        case JobState::done:
            return "done";
        case JobState::failed:
            return "failed";
        case JobState::cancelled:
            return "cancelled";
    }
    return "failed";
}

JobManager::JobManager(Options options) : options_(std::move(options)) {
    std::random_device rd;
    id_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
                static_cast<std::uint64_t>(Clock::now().time_since_epoch().count());
    std::size_t n = options_.workers;
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
}

JobManager::~JobManager() {
    {
        std::lock_guard guard(mutex_);
        stopping_ = true;
        for (auto &[id, job] : jobs_) job->cancel = true;
    }
    queue_cv_.notify_all();
    for (auto &w : workers_) w.join();
}

std::string JobManager::next_id() {
    // splitmix64 over a random start: unique within the process, opaque outside it.
    std::uint64_t x = (id_state_ += 0x9E3779B97F4A7C15ull);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    x ^= x >> 31;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string JobManager::submit(SearchConfig config) {
    purge_expired();
    auto job = std::make_shared<Job>();
    job->config = std::move(config);
    {
        std::lock_guard guard(mutex_);
        do {
            job->id = next_id();
        } while (jobs_.count(job->id));
        jobs_[job->id] = job;
        queue_.push_back(job);
    }
    queue_cv_.notify_one();
    return job->id;
}

std::shared_ptr<JobManager::Job> JobManager::find(const std::string &id) {
    std::lock_guard guard(mutex_);
    auto it = jobs_.find(id);
    return it == jobs_.end() ? nullptr : it->second;
}

std::optional<JobSnapshot> JobManager::get(const std::string &id) {
    auto job = find(id);
    if (!job) return std::nullopt;
    std::lock_guard guard(job->mutex);
    return job->snapshot();
}

std::vector<JobSnapshot> JobManager::list() {
    std::vector<std::shared_ptr<Job>> all;
    {
        std::lock_guard guard(mutex_);
        for (auto &[id, job] : jobs_) all.push_back(job);
    }
    std::vector<JobSnapshot> out;
    for (auto &job : all) {
        std::lock_guard guard(job->mutex);
        out.push_back(job->snapshot());
    }
    return out;
}

std::optional<JobState> JobManager::cancel(const std::string &id) {
    auto job = find(id);
    if (!job) return std::nullopt;
    bool finished_now = false;
    JobState state;
    {
        std::lock_guard guard(job->mutex);
        job->cancel = true;
        if (job->state == JobState::queued) {
            job->finish(JobState::cancelled, "cancelled before start");
            finished_now = true;
        }
        state = job->state;
    }
    if (finished_now) record(*job);
    return state;
}

std::optional<EventBatch> JobManager::events_since(const std::string &id, std::size_t from,
                                                   std::chrono::milliseconds wait) {
    auto job = find(id);
    if (!job) return std::nullopt;
    std::unique_lock guard(job->mutex);
    job->changed.wait_for(guard, wait, [&] { return job->events.size() > from || is_terminal(job->state); });
    EventBatch batch;
    for (std::size_t i = from; i < job->events.size(); ++i) batch.events.push_back(job->events[i]);
    batch.finished = is_terminal(job->state);
    return batch;
}

std::optional<JobSnapshot> JobManager::wait(const std::string &id, std::chrono::milliseconds timeout) {
    auto job = find(id);
    if (!job) return std::nullopt;
    std::unique_lock guard(job->mutex);
    job->changed.wait_for(guard, timeout, [&] { return is_terminal(job->state); });
    return job->snapshot();
}

void JobManager::purge_expired() {
    auto now = Clock::now();
    std::vector<std::shared_ptr<Job>> expired;  // destroyed after the locks are released
    std::lock_guard guard(mutex_);
    for (auto it = jobs_.begin(); it != jobs_.end();) {
        bool drop;
        {
            std::lock_guard job_guard(it->second->mutex);
            drop = it->second->finished_at && now - *it->second->finished_at >= options_.ttl;
        }
        if (drop) {
            expired.push_back(std::move(it->second));
            it = jobs_.erase(it);
        } else {
            ++it;
        }
    }
}

void JobManager::worker_loop() {
    while (true) {
        std::shared_ptr<Job> job;
        {
            std::unique_lock guard(mutex_);
            queue_cv_.wait(guard, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            job = queue_.front();
            queue_.pop_front();
        }
        run(job);
    }
}

void JobManager::run(const std::shared_ptr<Job> &job) {
    {
        std::lock_guard guard(job->mutex);
        if (job->state != JobState::queued) return;  // cancelled while queued
        job->state = JobState::running;
    }

    SearchHooks hooks;
    hooks.cancel = &job->cancel;
    hooks.on_progress = [&job](const ProgressEvent &p) {
        // The terminal event is published together with the result below.
        if (p.kind == "done") return;
        std::lock_guard guard(job->mutex);
        job->push(JobEvent{0, p.kind, p.loss, p.edge_count, p.restart, {}});
    };

    try {
        auto result = discover(job->config, hooks);
        std::lock_guard guard(job->mutex);
        job->result = std::move(result);
        job->finish(JobState::done, job->result->feasible ? "feasible" : "no solution at threshold");
    } catch (const SearchCancelled &) {
        std::lock_guard guard(job->mutex);
        job->finish(JobState::cancelled, "cancelled while running");
    } catch (const std::invalid_argument &e) {
        std::lock_guard guard(job->mutex);
        job->error = e.what();
        job->finish(JobState::failed, job->error);
    } catch (const std::exception &) {
        std::lock_guard guard(job->mutex);
        job->error = "internal error during search";
        job->finish(JobState::failed, job->error);
    }
    record(*job);
}

void JobManager::record(Job &job) {
    if (!options_.history_log) return;
    nlohmann::ordered_json line;
    {
        std::lock_guard guard(job.mutex);
        line["id"] = job.id;
        line["name"] = job.config.name;
        line["state"] = std::string(job_state_name(job.state));
        line["loss"] = job.result ? job.result->loss : job.loss;
        line["edge_count"] = job.result ? job.result->graph.num_edges() : job.edge_count;
        line["events"] = job.events.size();
        line["error"] = job.error;
    }
    std::lock_guard guard(log_mutex_);
    std::ofstream out(*options_.history_log, std::ios::app);
    out << line.dump() << "\n";
}

}  // namespace qgraph
