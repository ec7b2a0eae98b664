#pragma once

#include "ccm/error.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ccm {

/// Which series is predicted from which shadow manifold. XFromMY is the test
/// for "X drives Y": skill at recovering X from the reconstruction of Y.
enum class Direction : std::uint8_t {
    XFromMY = 0,
    YFromMX = 1,
};

std::string_view to_string(Direction d) noexcept;
/// Accepts the canonical tokens "X_from_MY" and "Y_from_MX".
Direction parse_direction(std::string_view token);

/// Implementation levels, from the single-threaded baseline to overlapped
/// table-backed pipelines.
enum class Strategy : std::uint8_t {
    Naive,         // one thread, distances recomputed per query
    Parallel,      // replicates spread over workers, no table
    Indexed,       // shared table per (E, tau); pipelines one after another
    IndexedAsync,  // shared tables; several (E, tau) pipelines in flight
};

std::string_view to_string(Strategy s) noexcept;
/// Accepts naive, parallel, indexed, indexed-async.
Strategy parse_strategy(std::string_view token);

struct ExecutionMode {
    Strategy strategy = Strategy::IndexedAsync;
    std::size_t workers = 1;
    std::size_t pipelines_in_flight = 2;  // only meaningful for IndexedAsync

    /// Workers actually used; Naive always runs on one.
    std::size_t effective_workers() const noexcept {
        return strategy == Strategy::Naive ? 1 : (workers == 0 ? 1 : workers);
    }
    bool uses_table() const noexcept {
        return strategy == Strategy::Indexed || strategy == Strategy::IndexedAsync;
    }
};

struct SweepConfig {
    std::size_t replicates = 1;
    std::vector<std::size_t> library_sizes;
    std::vector<int> embedding_dims;
    std::vector<int> delays;
    std::uint64_t seed = 42;
    std::vector<Direction> directions{Direction::XFromMY, Direction::YFromMX};
    ExecutionMode mode;

    std::size_t expected_records() const noexcept {
        return directions.size() * embedding_dims.size() * delays.size() *
               library_sizes.size() * replicates;
    }
};

struct Task {
    Direction direction = Direction::XFromMY;
    int E = 1;
    int tau = 1;
    std::size_t L = 0;
    std::size_t replicate = 0;

    friend bool operator==(const Task&, const Task&) = default;
    friend auto operator<=>(const Task&, const Task&) = default;
};

std::string describe(const Task& task);

struct SkillRecord {
    Direction direction = Direction::XFromMY;
    int E = 1;
    int tau = 1;
    std::size_t L = 0;
    std::size_t replicate = 0;
    double rho = 0.0;
    bool degenerate = false;

    Task task() const noexcept { return {direction, E, tau, L, replicate}; }

    friend bool operator==(const SkillRecord&, const SkillRecord&) = default;
};

class WorkerPanic : public Error {
public:
    WorkerPanic(Task task, const std::string& what)
        : Error(Errc::WorkerPanic, "task " + describe(task) + " failed: " + what), task_(task) {}

    const Task& task() const noexcept { return task_; }

private:
    Task task_;
};

}  // namespace ccm
