#pragma once

#include "ccm/neighbor_index.hpp"
#include "ccm/rng.hpp"
#include "ccm/runtime.hpp"
#include "ccm/sweep.hpp"
#include "ccm/timeseries.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ccm {

/// The random stream owned by one replicate, keyed by (seed, task tuple).
CounterRng replicate_stream(std::uint64_t seed, const Task& task) noexcept;

/// L distinct indices drawn uniformly from [0, M) without replacement
/// (partial Fisher-Yates). Throws Error(LibraryTooLarge) when L > M.
LibraryMask draw_library(CounterRng stream, std::size_t L, std::size_t M);

/// Everything the replicates of one (E, tau) pipeline read: both series, both
/// manifolds and, in indexed modes, the neighbor tables. Shared read-only once
/// the build phase is over.
class PipelineState {
public:
    PipelineState(const TimeSeries& x, const TimeSeries& y, EmbeddingParams params,
                  std::uint64_t seed);

    EmbeddingParams params() const noexcept { return params_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// The series being predicted.
    const TimeSeries& source(Direction d) const noexcept { return d == Direction::XFromMY ? *x_ : *y_; }
    /// The manifold neighbors are searched in.
    const ShadowManifold& manifold(Direction d) const noexcept {
        return d == Direction::XFromMY ? my_ : mx_;
    }

    void set_table(Direction d, NeighborTable table);
    const NeighborTable* table(Direction d) const noexcept {
        const auto& slot = tables_[static_cast<std::size_t>(d)];
        return slot ? &*slot : nullptr;
    }
    std::size_t table_entries() const noexcept;

    /// Table lookup when a table is present, brute force otherwise.
    NeighborSearch search(Direction d) const;

private:
    const TimeSeries* x_;
    const TimeSeries* y_;
    EmbeddingParams params_;
    std::uint64_t seed_;
    ShadowManifold mx_;
    ShadowManifold my_;
    std::array<std::optional<NeighborTable>, 2> tables_;
};

/// One replicate: draw the library, cross map every manifold point, score.
/// InsufficientNeighbors yields a degenerate record with rho = 0.
SkillRecord evaluate_replicate(const Task& task, const PipelineState& shared);

/// Throws Error(ConfigInvalid) naming the first violated constraint.
void validate_config(const SweepConfig& config, std::size_t series_length);

/// All task tuples in canonical order (E, tau, direction, L, replicate).
std::vector<Task> enumerate_tasks(const SweepConfig& config);

struct SweepResult {
    std::vector<SkillRecord> records;  // canonical task order
    RunMetrics metrics;
};

/// Throws Error(ConfigInvalid) or Error(LengthMismatch) before any work starts.
SweepResult run_sweep(const TimeSeries& x, const TimeSeries& y, const SweepConfig& config);

struct LevelStats {
    std::size_t L = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation; 0 for a single replicate
};

struct ConvergenceCell {
    Direction direction = Direction::XFromMY;
    int E = 1;
    int tau = 1;
    std::vector<LevelStats> levels;  // ascending L
    double delta_rho = 0.0;
    bool converged = false;
};

struct ConvergenceSummary {
    double min_delta = 0.1;
    std::vector<ConvergenceCell> cells;

    const ConvergenceCell* find(Direction d, int E, int tau) const noexcept;
};

/// Mean and spread of rho per L for every (direction, E, tau) cell, without a
/// verdict. Cells are ordered by (direction, E, tau).
std::vector<ConvergenceCell> aggregate_skill(std::span<const SkillRecord> records);

/// Per (direction, E, tau) cell: converged iff the mean skill rises by more than
/// min_delta from the smallest to the largest L and ends positive.
/// Throws Error(InsufficientLValues) for a cell with fewer than two L values.
ConvergenceSummary summarize_convergence(std::span<const SkillRecord> records,
                                         double min_delta = 0.1);

}  // namespace ccm
