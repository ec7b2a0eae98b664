#include "ccm/runtime.hpp"

#include "ccm/engine.hpp"
#include "ccm/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <optional>

namespace ccm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point origin) {
    return std::chrono::duration<double>(Clock::now() - origin).count();
}

constexpr std::size_t kTableRowGrain = 32;

}  // namespace

WorkerPool::WorkerPool(std::size_t workers) {
    const std::size_t n = std::max<std::size_t>(1, workers);
    threads_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        threads_.emplace_back([this](std::stop_token stop) { work(stop); });
    }
}

WorkerPool::~WorkerPool() {
    for (auto& t : threads_) {
        t.request_stop();
    }
    ready_.notify_all();
    threads_.clear();
}

void WorkerPool::submit(std::function<void()> job) {
    {
        std::lock_guard lock(mutex_);
        queue_.push_back(std::move(job));
    }
    ready_.notify_one();
}

void WorkerPool::work(std::stop_token stop) {
    for (;;) {
        std::function<void()> job;
        {
            std::unique_lock lock(mutex_);
            if (!ready_.wait(lock, stop, [this] { return !queue_.empty(); })) {
                return;
            }
            job = std::move(queue_.front());
            queue_.pop_front();
        }
        job();
    }
}

TaskGroup::~TaskGroup() {
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return pending_ == 0; });
}

void TaskGroup::run(std::function<void()> job) {
    {
        std::lock_guard lock(mutex_);
        ++pending_;
    }
    pool_.submit([this, job = std::move(job)] {
        std::exception_ptr failure;
        try {
            job();
        } catch (...) {
            failure = std::current_exception();
        }
        std::lock_guard lock(mutex_);
        if (failure && !error_) {
            error_ = failure;
        }
        // Notify under the lock: the group may be destroyed as soon as the
        // waiter observes pending_ == 0.
        if (--pending_ == 0) {
            done_.notify_all();
        }
    });
}

void TaskGroup::wait() {
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return pending_ == 0; });
    if (error_) {
        std::rethrow_exception(std::exchange(error_, nullptr));
    }
}

void parallel_for(WorkerPool* pool, std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    grain = std::max<std::size_t>(1, grain);
    if (pool == nullptr || n <= grain) {
        body(0, n);
        return;
    }
    TaskGroup group(*pool);
    for (std::size_t begin = 0; begin < n; begin += grain) {
        const std::size_t end = std::min(n, begin + grain);
        group.run([&body, begin, end] { body(begin, end); });
    }
    group.wait();
}

CompletionLog schedule_pipelines(std::span<PipelineJob> jobs, Strategy strategy,
                                 std::size_t in_flight) {
    if (jobs.empty()) {
        throw Error(Errc::InvalidArgument, "no pipelines to schedule");
    }
    CompletionLog log;
    log.start_seconds.assign(jobs.size(), 0.0);
    log.end_seconds.assign(jobs.size(), 0.0);
    const auto origin = Clock::now();

    const bool overlap = strategy == Strategy::IndexedAsync && in_flight > 1 && jobs.size() > 1;
    if (!overlap) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            log.start_seconds[i] = seconds_since(origin);
            jobs[i].run();
            log.end_seconds[i] = seconds_since(origin);
            log.order.push_back(i);
        }
        log.wall_seconds = seconds_since(origin);
        return log;
    }

    // Each driver thread claims the next unstarted pipeline, so at most
    // `in_flight` pipelines are live and they start in submission order.
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mutex;
    std::exception_ptr error;
    {
        std::vector<std::jthread> drivers;
        const std::size_t count = std::min(in_flight, jobs.size());
        drivers.reserve(count);
        for (std::size_t d = 0; d < count; ++d) {
            drivers.emplace_back([&] {
                for (;;) {
                    if (failed.load()) {
                        return;
                    }
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) {
                        return;
                    }
                    const double start = seconds_since(origin);
                    try {
                        jobs[i].run();
                    } catch (...) {
                        std::lock_guard lock(mutex);
                        if (!error) {
                            error = std::current_exception();
                        }
                        failed.store(true);
                        return;
                    }
                    std::lock_guard lock(mutex);
                    log.start_seconds[i] = start;
                    log.end_seconds[i] = seconds_since(origin);
                    log.order.push_back(i);
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    log.wall_seconds = seconds_since(origin);
    return log;
}

namespace {

struct PipelinePlan {
    EmbeddingParams params;
    std::vector<std::size_t> task_indices;
    std::vector<Direction> directions;
};

std::vector<PipelinePlan> plan_pipelines(std::span<const Task> tasks) {
    std::vector<PipelinePlan> plans;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const EmbeddingParams params{tasks[i].E, tasks[i].tau};
        auto it = std::find_if(plans.begin(), plans.end(),
                               [&](const PipelinePlan& p) { return p.params == params; });
        if (it == plans.end()) {
            plans.push_back({params, {}, {}});
            it = std::prev(plans.end());
        }
        it->task_indices.push_back(i);
        if (std::find(it->directions.begin(), it->directions.end(), tasks[i].direction) ==
            it->directions.end()) {
            it->directions.push_back(tasks[i].direction);
        }
    }
    return plans;
}

/// Tracks table entries alive at once across concurrently running pipelines.
class TableLedger {
public:
    void add(std::size_t entries) {
        std::lock_guard lock(mutex_);
        live_ += entries;
        peak_ = std::max(peak_, live_);
        ++builds_;
    }
    void release(std::size_t entries) {
        std::lock_guard lock(mutex_);
        live_ -= entries;
    }
    std::size_t peak() const { return peak_; }
    std::size_t builds() const { return builds_; }

private:
    std::mutex mutex_;
    std::size_t live_ = 0;
    std::size_t peak_ = 0;
    std::size_t builds_ = 0;
};

/// Keeps the failure with the smallest task tuple so the reported task does
/// not depend on scheduling.
class FailureSlot {
public:
    void record(const Task& task, std::string what) {
        std::lock_guard lock(mutex_);
        if (!failure_ || task < failure_->first) {
            failure_.emplace(task, std::move(what));
        }
    }
    void rethrow_if_any() const {
        if (failure_) {
            throw WorkerPanic(failure_->first, failure_->second);
        }
    }

private:
    std::mutex mutex_;
    std::optional<std::pair<Task, std::string>> failure_;
};

}  // namespace

ExecutionResult execute(std::span<const Task> tasks, const PipelineFactory& factory,
                        const ExecutionMode& mode) {
    if (tasks.empty()) {
        throw Error(Errc::InvalidArgument, "empty task set");
    }
    const auto origin = Clock::now();
    const auto plans = plan_pipelines(tasks);
    const std::size_t workers = mode.effective_workers();
    std::unique_ptr<WorkerPool> pool;
    if (mode.strategy != Strategy::Naive) {
        pool = std::make_unique<WorkerPool>(workers);
    }

    ExecutionResult result;
    result.records.resize(tasks.size());
    result.metrics.task_count = tasks.size();
    result.metrics.workers = workers;
    result.metrics.pipelines.resize(plans.size());

    TableLedger ledger;
    FailureSlot failures;
    std::vector<PipelineJob> jobs;
    jobs.reserve(plans.size());
    for (std::size_t p = 0; p < plans.size(); ++p) {
        const auto& plan = plans[p];
        jobs.push_back({"E=" + std::to_string(plan.params.E) + " tau=" +
                            std::to_string(plan.params.tau),
                        [&, p] {
                            const auto& plan = plans[p];
                            auto& timing = result.metrics.pipelines[p];
                            timing.params = plan.params;
                            timing.tasks = plan.task_indices.size();
                            timing.start_seconds = seconds_since(origin);

                            auto state = std::make_unique<PipelineState>(factory(plan.params));
                            if (mode.uses_table()) {
                                for (const Direction d : plan.directions) {
                                    NeighborTableBuilder builder(state->manifold(d));
                                    parallel_for(pool.get(), builder.rows(), kTableRowGrain,
                                                 [&builder](std::size_t b, std::size_t e) {
                                                     builder.build_rows(b, e);
                                                 });
                                    state->set_table(d, std::move(builder).finish());
                                    ledger.add(state->table(d)->entry_count());
                                    ++timing.table_builds;
                                }
                            }
                            const double built = seconds_since(origin);
                            timing.build_seconds = built - timing.start_seconds;

                            const PipelineState& shared = *state;
                            auto run_one = [&](std::size_t idx) {
                                try {
                                    result.records[idx] = evaluate_replicate(tasks[idx], shared);
                                } catch (const std::exception& e) {
                                    failures.record(tasks[idx], e.what());
                                }
                            };
                            if (pool) {
                                TaskGroup group(*pool);
                                for (const std::size_t idx : plan.task_indices) {
                                    group.run([&run_one, idx] { run_one(idx); });
                                }
                                group.wait();
                            } else {
                                for (const std::size_t idx : plan.task_indices) {
                                    run_one(idx);
                                }
                            }
                            ledger.release(state->table_entries());
                            state.reset();

                            timing.end_seconds = seconds_since(origin);
                            timing.task_seconds = timing.end_seconds - built;
                        }});
    }

    const auto log = schedule_pipelines(jobs, mode.strategy, mode.pipelines_in_flight);
    failures.rethrow_if_any();

    auto& metrics = result.metrics;
    metrics.completion_order = log.order;
    metrics.table_builds = ledger.builds();
    metrics.peak_table_entries = ledger.peak();
    for (const auto& t : metrics.pipelines) {
        metrics.table_build_seconds += t.build_seconds;
    }
    metrics.sweep_seconds = seconds_since(origin);
    return result;
}

}  // namespace ccm
