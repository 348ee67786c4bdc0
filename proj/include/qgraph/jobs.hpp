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

#ifndef QGRAPH_JOBS_HPP
#define QGRAPH_JOBS_HPP

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qgraph/discovery.hpp"

namespace qgraph {

enum class JobState { queued, running, done, failed, cancelled };

std::string_view job_state_name(JobState state);
inline bool is_terminal(JobState s) { return s == JobState::done || s == JobState::failed || s == JobState::cancelled; }

struct JobEvent {
    std::size_t seq = 0;
    /// optimizing | restart | pruning | edge_removed | done | failed | cancelled
    std::string kind;
    double loss = 1.0;
    std::size_t edge_count = 0;
    std::optional<int> restart;
    std::string message;
};

struct JobSnapshot {
    std::string id;
    JobState state = JobState::queued;
    std::string name;
    /// Most recent phase event kind (empty until the job starts).
    std::string phase;
    double loss = 1.0;
    std::size_t edge_count = 0;
    std::size_t event_count = 0;
    std::optional<SearchResult> result;
    std::string error;
};

struct EventBatch {
    std::vector<JobEvent> events;
    /// True once the job is terminal and `events` reaches the end of its history.
    bool finished = false;
};

/// Bounded worker pool running discovery jobs in FIFO order. Each job keeps its full event history,
/// so a subscriber can replay from any offset.
class JobManager {
   public:
    struct Options {
        std::size_t workers = 0;  // 0: hardware concurrency
        std::chrono::seconds ttl{24 * 3600};
        /// Append-only JSON-lines record of finished jobs.
        std::optional<std::filesystem::path> history_log;
    };

    explicit JobManager(Options options);
    ~JobManager();
    JobManager(const JobManager &) = delete;
    JobManager &operator=(const JobManager &) = delete;

    /// Queues a search; the config must already validate. Returns the job id.
    std::string submit(SearchConfig config);

    std::optional<JobSnapshot> get(const std::string &id);
    std::vector<JobSnapshot> list();

    /// Requests cancellation. Queued jobs cancel immediately; running jobs stop at the next
    /// optimizer iteration; finished jobs are left as they are. Returns the state after the
    /// request, or nullopt for an unknown id.
    std::optional<JobState> cancel(const std::string &id);

    /// Events with seq >= from. Blocks up to `wait` when none are available yet and the job
    /// is still live. nullopt for an unknown id.
    std::optional<EventBatch> events_since(const std::string &id, std::size_t from, std::chrono::milliseconds wait);

    /// Blocks until the job is terminal or `timeout` elapses; returns the final snapshot.
    std::optional<JobSnapshot> wait(const std::string &id, std::chrono::milliseconds timeout);

    /// Drops finished jobs older than the TTL. Called on every submit.
    void purge_expired();

    std::size_t worker_count() const { return workers_.size(); }

   private:
    struct Job;

    std::shared_ptr<Job> find(const std::string &id);
    void worker_loop();
    void run(const std::shared_ptr<Job> &job);
    void record(Job &job);
    std::string next_id();

    Options options_;
    std::mutex mutex_;
    std::condition_variable queue_cv_;
    std::deque<std::shared_ptr<Job>> queue_;
    std::map<std::string, std::shared_ptr<Job>> jobs_;
    bool stopping_ = false;
    std::uint64_t id_state_;
    std::mutex log_mutex_;
    std::vector<std::thread> workers_;
};

}  // namespace qgraph

#endif
