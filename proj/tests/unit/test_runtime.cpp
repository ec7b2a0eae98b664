#include "ccm/engine.hpp"
#include "ccm/error.hpp"
#include "ccm/runtime.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <stdexcept>

using namespace ccm;

namespace {

struct Fixture {
    TimeSeries x;
    TimeSeries y;
};

Fixture logistic(std::size_t n) {
    auto [x, y] = generate_coupled_logistic(n, 0.1, 0.0, 3);
    return {std::move(x), std::move(y)};
}

SweepConfig grid_config() {
    SweepConfig c;
    c.replicates = 4;
    c.library_sizes = {30, 120};
    c.embedding_dims = {1, 2, 3};
    c.delays = {1, 2, 3};
    c.seed = 17;
    return c;
}

}  // namespace

TEST(WorkerPool, RunsEveryJob) {
    WorkerPool pool(3);
    std::atomic<int> count{0};
    TaskGroup group(pool);
    for (int i = 0; i < 100; ++i) {
        group.run([&] { count.fetch_add(1); });
    }
    group.wait();
    EXPECT_EQ(count.load(), 100);
}

TEST(TaskGroup, RethrowsJobFailure) {
    WorkerPool pool(2);
    TaskGroup group(pool);
    group.run([] { throw std::runtime_error("boom"); });
    group.run([] {});
    EXPECT_THROW(group.wait(), std::runtime_error);
}

TEST(ParallelFor, CoversRangeOnce) {
    WorkerPool pool(4);
    std::vector<int> seen(1001);
    parallel_for(&pool, seen.size(), 17, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            ++seen[i];
        }
    });
    EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), 1001);
    std::vector<int> inline_seen(10);
    parallel_for(nullptr, inline_seen.size(), 3, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            ++inline_seen[i];
        }
    });
    EXPECT_EQ(std::count(inline_seen.begin(), inline_seen.end(), 1), 10);
}

TEST(Execute, EveryModeGivesIdenticalRecords) {
    const auto f = logistic(300);
    auto c = grid_config();
    c.mode = {Strategy::Naive, 1, 1};
    const auto reference = run_sweep(f.x, f.y, c).records;
    for (const auto strategy : {Strategy::Parallel, Strategy::Indexed, Strategy::IndexedAsync}) {
        for (const std::size_t workers : {1u, 4u}) {
            c.mode = {strategy, workers, 3};
            const auto got = run_sweep(f.x, f.y, c).records;
            ASSERT_EQ(got, reference) << to_string(strategy) << " x" << workers;
        }
    }
}

TEST(Execute, OneTableBuildPerCell) {
    const auto f = logistic(300);
    auto c = grid_config();
    c.directions = {Direction::XFromMY};
    c.mode = {Strategy::Indexed, 2, 1};
    const auto m = run_sweep(f.x, f.y, c).metrics;
    EXPECT_EQ(m.table_builds, 9u);
    EXPECT_EQ(m.pipelines.size(), 9u);
    c.mode = {Strategy::Parallel, 2, 1};
    EXPECT_EQ(run_sweep(f.x, f.y, c).metrics.table_builds, 0u);
    c.directions = {Direction::XFromMY, Direction::YFromMX};
    c.mode = {Strategy::IndexedAsync, 2, 2};
    EXPECT_EQ(run_sweep(f.x, f.y, c).metrics.table_builds, 18u);
}

TEST(Execute, PeakTableEntries) {
    const auto f = logistic(200);
    SweepConfig c;
    c.library_sizes = {50};
    c.embedding_dims = {2};
    c.delays = {1};
    c.directions = {Direction::XFromMY};
    c.mode = {Strategy::Indexed, 1, 1};
    const auto m = run_sweep(f.x, f.y, c).metrics;
    EXPECT_EQ(m.peak_table_entries, 199u * 198u);
    // Sequential pipelines hold one table at a time; the largest is E = 1.
    auto g = grid_config();
    g.directions = {Direction::XFromMY};
    g.mode = {Strategy::Indexed, 1, 1};
    const auto gm = run_sweep(f.x, f.y, g).metrics;
    EXPECT_EQ(gm.peak_table_entries, 200u * 199u);
}

TEST(Execute, EmptyTaskSet) {
    const auto f = logistic(200);
    const PipelineFactory factory = [&](EmbeddingParams p) {
        return PipelineState(f.x, f.y, p, 1);
    };
    try {
        execute({}, factory, ExecutionMode{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidArgument);
    }
}

TEST(Execute, FailingTaskSurfacesItsTuple) {
    const auto f = logistic(200);
    const PipelineFactory factory = [&](EmbeddingParams p) {
        return PipelineState(f.x, f.y, p, 1);
    };
    const std::vector<Task> tasks{{Direction::XFromMY, 2, 1, 50, 0},
                                  {Direction::XFromMY, 2, 1, 500, 3},
                                  {Direction::XFromMY, 2, 1, 50, 1}};
    for (const auto strategy :
         {Strategy::Naive, Strategy::Parallel, Strategy::Indexed, Strategy::IndexedAsync}) {
        try {
            execute(tasks, factory, {strategy, 2, 2});
            FAIL() << to_string(strategy);
        } catch (const WorkerPanic& e) {
            EXPECT_EQ(e.task(), tasks[1]);
            EXPECT_EQ(e.code(), Errc::WorkerPanic);
        }
    }
}

TEST(SchedulePipelines, SequentialModesFinishInSubmissionOrder) {
    std::vector<PipelineJob> jobs;
    for (int i = 0; i < 5; ++i) {
        jobs.push_back({"job" + std::to_string(i), [i] {
                            std::this_thread::sleep_for(std::chrono::milliseconds(5 * (5 - i)));
                        }});
    }
    const auto log = schedule_pipelines(jobs, Strategy::Indexed, 4);
    EXPECT_EQ(log.order, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    for (std::size_t i = 1; i < 5; ++i) {
        EXPECT_GE(log.start_seconds[i], log.end_seconds[i - 1]);
    }
}

TEST(SchedulePipelines, AsyncOverlapsJobs) {
    std::atomic<int> running{0};
    std::atomic<int> peak{0};
    std::vector<PipelineJob> jobs;
    for (int i = 0; i < 6; ++i) {
        jobs.push_back({"job", [&] {
                            const int now = running.fetch_add(1) + 1;
                            int seen = peak.load();
                            while (now > seen && !peak.compare_exchange_weak(seen, now)) {
                            }
                            std::this_thread::sleep_for(std::chrono::milliseconds(30));
                            running.fetch_sub(1);
                        }});
    }
    const auto log = schedule_pipelines(jobs, Strategy::IndexedAsync, 2);
    EXPECT_EQ(log.order.size(), 6u);
    EXPECT_EQ(peak.load(), 2);
}

TEST(SchedulePipelines, RethrowsFailure) {
    std::vector<PipelineJob> jobs{{"ok", [] {}}, {"bad", [] { throw std::runtime_error("x"); }}};
    EXPECT_THROW(schedule_pipelines(jobs, Strategy::IndexedAsync, 2), std::runtime_error);
    EXPECT_THROW(schedule_pipelines(jobs, Strategy::Indexed, 1), std::runtime_error);
}
