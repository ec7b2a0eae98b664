#pragma once

#include "ccm/sweep.hpp"
#include "ccm/timeseries.hpp"

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace ccm {

class PipelineState;

/// Fixed-size FIFO worker pool. Jobs must not block on other jobs of the same
/// pool; waiting happens on caller or driver threads.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const noexcept { return threads_.size(); }
    void submit(std::function<void()> job);

private:
    void work(std::stop_token stop);

    std::mutex mutex_;
    std::condition_variable_any ready_;
    std::deque<std::function<void()>> queue_;
    std::vector<std::jthread> threads_;
};

/// A batch of pool jobs that can be waited on together. The first exception
/// thrown by a job is rethrown from wait().
class TaskGroup {
public:
    explicit TaskGroup(WorkerPool& pool) : pool_(pool) {}
    ~TaskGroup();

    TaskGroup(const TaskGroup&) = delete;
    TaskGroup& operator=(const TaskGroup&) = delete;

    void run(std::function<void()> job);
    void wait();

private:
    WorkerPool& pool_;
    std::mutex mutex_;
    std::condition_variable done_;
    std::size_t pending_ = 0;
    std::exception_ptr error_;
};

/// Splits [0, n) into chunks of at most `grain` and runs them on the pool.
/// With no pool the body runs inline.
void parallel_for(WorkerPool* pool, std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

struct PipelineTiming {
    EmbeddingParams params;
    std::size_t tasks = 0;
    std::size_t table_builds = 0;
    double start_seconds = 0.0;  // offsets from the start of execute()
    double build_seconds = 0.0;
    double task_seconds = 0.0;
    double end_seconds = 0.0;
};

struct RunMetrics {
    double table_build_seconds = 0.0;  // summed over pipelines
    double sweep_seconds = 0.0;        // wall time of the whole execution
    std::size_t task_count = 0;
    std::size_t table_builds = 0;
    std::size_t peak_table_entries = 0;  // max simultaneously live entries
    std::size_t workers = 1;
    std::vector<PipelineTiming> pipelines;   // submission order
    std::vector<std::size_t> completion_order;  // indices into pipelines
};

/// One unit handed to the pipeline scheduler.
struct PipelineJob {
    std::string label;
    std::function<void()> run;
};

struct CompletionLog {
    std::vector<std::size_t> order;  // job indices in completion order
    std::vector<double> start_seconds;
    std::vector<double> end_seconds;
    double wall_seconds = 0.0;
};

/// Runs pipeline jobs either strictly one after another (every strategy but
/// IndexedAsync) or with up to `in_flight` jobs running concurrently on driver
/// threads. Rethrows the first job failure after all started jobs finish.
CompletionLog schedule_pipelines(std::span<PipelineJob> jobs, Strategy strategy,
                                 std::size_t in_flight);

using PipelineFactory = std::function<PipelineState(EmbeddingParams)>;

struct ExecutionResult {
    std::vector<SkillRecord> records;  // same order as the task span
    RunMetrics metrics;
};

/// Groups tasks into (E, tau) pipelines, builds shared state once per pipeline
/// (tables only in indexed modes) and evaluates every replicate. Throws
/// Error(InvalidArgument) on an empty task set and WorkerPanic when a task fails.
ExecutionResult execute(std::span<const Task> tasks, const PipelineFactory& factory,
                        const ExecutionMode& mode);

}  // namespace ccm
