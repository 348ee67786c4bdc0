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

#include <filesystem>
#include <fstream>

#include "qgraph/jobs.hpp"
#include "qgraph/targets.hpp"

namespace qgraph {
namespace {

using namespace std::chrono_literals;

SearchConfig ghz_job(std::uint64_t seed) {
    SearchConfig c;
    c.name = "ghz-job";
    for (std::size_t i = 0; i < 4; ++i) c.roster.push_back(detector(i, 2));
    c.target = ghz_state(4, 2);
    c.seed = seed;
    return c;
}

// Slow enough to be observed while running.
SearchConfig slow_job() {
    SearchConfig c;
    c.name = "slow";
    for (std::size_t i = 0; i < 8; ++i) c.roster.push_back(detector(i, 2));
    c.target = ghz_state(8, 2);
    c.optimizer.max_iterations = 100000;
    c.optimizer.restarts = 2;
    c.optimizer.loss_tolerance = 0.0;
    c.optimizer.gradient_tolerance = 0.0;
    return c;
}

TEST(Jobs, RunsToCompletionWithEventHistory) {
    JobManager jobs({1, std::chrono::seconds(3600), std::nullopt});
    auto id = jobs.submit(ghz_job(1));
    EXPECT_EQ(id.size(), 16u);
    auto snap = jobs.wait(id, 60s);
    ASSERT_TRUE(snap);
    EXPECT_EQ(snap->state, JobState::done);
    ASSERT_TRUE(snap->result);
    EXPECT_TRUE(snap->result->feasible);

    auto batch = jobs.events_since(id, 0, 0ms);
    ASSERT_TRUE(batch);
    EXPECT_TRUE(batch->finished);
    ASSERT_FALSE(batch->events.empty());
    EXPECT_EQ(batch->events.front().kind, "optimizing");
    EXPECT_EQ(batch->events.back().kind, "done");
    for (std::size_t i = 0; i < batch->events.size(); ++i) EXPECT_EQ(batch->events[i].seq, i);
    EXPECT_EQ(batch->events.back().edge_count, snap->result->graph.num_edges());

    // Replay from an offset yields the same tail.
    auto tail = jobs.events_since(id, 2, 0ms);
    ASSERT_TRUE(tail);
    EXPECT_EQ(tail->events.size(), batch->events.size() - 2);
    EXPECT_EQ(tail->events.front().seq, 2u);
}

TEST(Jobs, UnknownIds) {
    JobManager jobs({1, std::chrono::seconds(3600), std::nullopt});
    EXPECT_FALSE(jobs.get("0000000000000000"));
    EXPECT_FALSE(jobs.cancel("nope"));
    EXPECT_FALSE(jobs.events_since("nope", 0, 0ms));
}

TEST(Jobs, CancelQueuedAndRunning) {
    JobManager jobs({1, std::chrono::seconds(3600), std::nullopt});
    auto running = jobs.submit(slow_job());
    auto queued = jobs.submit(ghz_job(2));
    auto state = jobs.cancel(queued);
    ASSERT_TRUE(state);
    EXPECT_EQ(*state, JobState::cancelled);

    // Wait until the slow job has started before cancelling it.
    auto started = jobs.events_since(running, 0, 10s);
    ASSERT_TRUE(started);
    ASSERT_FALSE(started->events.empty());
    jobs.cancel(running);
    auto snap = jobs.wait(running, 30s);
    ASSERT_TRUE(snap);
    EXPECT_EQ(snap->state, JobState::cancelled);
    EXPECT_FALSE(snap->result);
    EXPECT_EQ(jobs.get(queued)->state, JobState::cancelled);
}

TEST(Jobs, FifoAcrossSingleWorker) {
    JobManager jobs({1, std::chrono::seconds(3600), std::nullopt});
    auto a = jobs.submit(ghz_job(1));
    auto b = jobs.submit(ghz_job(2));
    auto sb = jobs.wait(b, 60s);
    auto sa = jobs.get(a);
    ASSERT_TRUE(sa && sb);
    EXPECT_EQ(sa->state, JobState::done);
    EXPECT_EQ(sb->state, JobState::done);
}

TEST(Jobs, TtlPurgesFinishedJobs) {
    JobManager jobs({1, std::chrono::seconds(0), std::nullopt});
    auto id = jobs.submit(ghz_job(1));
    jobs.wait(id, 60s);
    jobs.purge_expired();
    EXPECT_FALSE(jobs.get(id));
}

TEST(Jobs, HistoryLogGetsOneLinePerJob) {
    auto log = std::filesystem::temp_directory_path() / "qgraph-jobs-history.jsonl";
    std::filesystem::remove(log);
    {
        JobManager jobs({2, std::chrono::seconds(3600), log});
        auto a = jobs.submit(ghz_job(1));
        auto b = jobs.submit(ghz_job(2));
        jobs.wait(a, 60s);
        jobs.wait(b, 60s);
    }
    std::ifstream in(log);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        EXPECT_NE(line.find("\"state\":\"done\""), std::string::npos);
        ++lines;
    }
    EXPECT_EQ(lines, 2);
    std::filesystem::remove(log);
}

TEST(Jobs, ManyConcurrentSubmissions) {
    JobManager jobs({4, std::chrono::seconds(3600), std::nullopt});
    std::vector<std::string> ids;
    for (std::uint64_t s = 1; s <= 12; ++s) ids.push_back(jobs.submit(ghz_job(s)));
    for (auto &id : ids) {
        auto snap = jobs.wait(id, 120s);
        ASSERT_TRUE(snap);
        EXPECT_EQ(snap->state, JobState::done);
    }
    EXPECT_EQ(jobs.list().size(), 12u);
}

}  // namespace
}  // namespace qgraph
