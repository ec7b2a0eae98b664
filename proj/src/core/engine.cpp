#include "ccm/engine.hpp"

#include "ccm/error.hpp"
#include "ccm/xmap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace ccm {

std::string_view to_string(Direction d) noexcept {
    return d == Direction::XFromMY ? "X_from_MY" : "Y_from_MX";
}

Direction parse_direction(std::string_view token) {
    if (token == "X_from_MY") {
        return Direction::XFromMY;
    }
    if (token == "Y_from_MX") {
        return Direction::YFromMX;
    }
    throw Error(Errc::InvalidArgument, "unknown direction '" + std::string(token) + "'");
}

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::Naive: return "naive";
        case Strategy::Parallel: return "parallel";
        case Strategy::Indexed: return "indexed";
        case Strategy::IndexedAsync: return "indexed-async";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view token) {
    for (const auto s : {Strategy::Naive, Strategy::Parallel, Strategy::Indexed,
                         Strategy::IndexedAsync}) {
        if (token == to_string(s)) {
            return s;
        }
    }
    throw Error(Errc::InvalidArgument, "unknown mode '" + std::string(token) +
                                           "' (expected naive, parallel, indexed, indexed-async)");
}

std::string describe(const Task& task) {
    return "(" + std::string(to_string(task.direction)) + ", E=" + std::to_string(task.E) +
           ", tau=" + std::to_string(task.tau) + ", L=" + std::to_string(task.L) +
           ", replicate=" + std::to_string(task.replicate) + ")";
}

CounterRng replicate_stream(std::uint64_t seed, const Task& task) noexcept {
    return CounterRng(stream_key(seed, static_cast<std::uint64_t>(task.direction),
                                 static_cast<std::uint64_t>(task.E),
                                 static_cast<std::uint64_t>(task.tau), task.L, task.replicate));
}

LibraryMask draw_library(CounterRng stream, std::size_t L, std::size_t M) {
    if (L > M) {
        throw Error(Errc::LibraryTooLarge, "library size " + std::to_string(L) +
                                               " exceeds manifold size " + std::to_string(M));
    }
    if (L == M) {
        return LibraryMask::full(M);
    }
    std::vector<std::size_t> pool(M);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < L; ++i) {
        const auto j = i + static_cast<std::size_t>(stream.below(M - i));
        std::swap(pool[i], pool[j]);
    }
    return LibraryMask(M, std::span<const std::size_t>(pool.data(), L));
}

PipelineState::PipelineState(const TimeSeries& x, const TimeSeries& y, EmbeddingParams params,
                             std::uint64_t seed)
    : x_(&x), y_(&y), params_(params), seed_(seed), mx_(embed(x, params)), my_(embed(y, params)) {
    if (x.size() != y.size()) {
        throw Error(Errc::LengthMismatch, "series '" + x.name() + "' and '" + y.name() +
                                              "' differ in length");
    }
}

void PipelineState::set_table(Direction d, NeighborTable table) {
    tables_[static_cast<std::size_t>(d)].emplace(std::move(table));
}

std::size_t PipelineState::table_entries() const noexcept {
    std::size_t total = 0;
    for (const auto& t : tables_) {
        total += t ? t->entry_count() : 0;
    }
    return total;
}

NeighborSearch PipelineState::search(Direction d) const {
    if (const auto* t = table(d)) {
        return NeighborSearch::indexed(*t);
    }
    return NeighborSearch::brute_force(manifold(d));
}

SkillRecord evaluate_replicate(const Task& task, const PipelineState& shared) {
    if (task.E != shared.params().E || task.tau != shared.params().tau) {
        throw Error(Errc::InvalidArgument, "task " + describe(task) +
                                               " routed to the wrong pipeline");
    }
    const ShadowManifold& manifold = shared.manifold(task.direction);
    const LibraryMask library =
        draw_library(replicate_stream(shared.seed(), task), task.L, manifold.size());

    SkillRecord record{task.direction, task.E, task.tau, task.L, task.replicate, 0.0, false};
    try {
        const auto result = cross_map(shared.source(task.direction), manifold,
                                      shared.search(task.direction), library, manifold.times());
        record.rho = result.rho;
        record.degenerate = result.degenerate;
    } catch (const Error& e) {
        if (e.code() != Errc::InsufficientNeighbors) {
            throw;
        }
        record.rho = 0.0;
        record.degenerate = true;
    }
    return record;
}

void validate_config(const SweepConfig& config, std::size_t series_length) {
    auto fail = [](const std::string& what) { throw Error(Errc::ConfigInvalid, what); };
    if (config.replicates < 1) {
        fail("r must be >= 1");
    }
    if (config.library_sizes.empty() || config.embedding_dims.empty() || config.delays.empty()) {
        fail("the L, E and tau grids must all be non-empty");
    }
    if (config.directions.empty()) {
        fail("at least one direction is required");
    }
    if (std::set(config.directions.begin(), config.directions.end()).size() !=
        config.directions.size()) {
        fail("directions repeated");
    }
    auto unique = [](const auto& grid) {
        return std::set(grid.begin(), grid.end()).size() == grid.size();
    };
    if (!unique(config.library_sizes) || !unique(config.embedding_dims) || !unique(config.delays)) {
        fail("grid values must be distinct");
    }
    for (const int E : config.embedding_dims) {
        if (E < 1) {
            fail("E must be >= 1 (got " + std::to_string(E) + ")");
        }
    }
    for (const int tau : config.delays) {
        if (tau < 1) {
            fail("tau must be >= 1 (got " + std::to_string(tau) + ")");
        }
    }
    const int max_e = *std::max_element(config.embedding_dims.begin(), config.embedding_dims.end());
    const int max_tau = *std::max_element(config.delays.begin(), config.delays.end());
    const std::size_t widest = static_cast<std::size_t>(max_e - 1) * static_cast<std::size_t>(max_tau);
    if (widest >= series_length) {
        fail("(E-1)*tau = " + std::to_string(widest) + " leaves an empty manifold for N = " +
             std::to_string(series_length));
    }
    const std::size_t min_points = series_length - widest;
    const auto min_library = static_cast<std::size_t>(max_e) + 2;
    for (const std::size_t L : config.library_sizes) {
        if (L < min_library) {
            fail("L = " + std::to_string(L) + " is below E+2 = " + std::to_string(min_library) +
                 " for E = " + std::to_string(max_e));
        }
        if (L > min_points) {
            fail("L = " + std::to_string(L) + " exceeds the smallest manifold size M = " +
                 std::to_string(min_points) + " (N = " + std::to_string(series_length) +
                 ", E = " + std::to_string(max_e) + ", tau = " + std::to_string(max_tau) + ")");
        }
    }
    if (config.mode.workers < 1) {
        fail("workers must be >= 1");
    }
    if (config.mode.strategy == Strategy::IndexedAsync && config.mode.pipelines_in_flight < 1) {
        fail("pipelines in flight must be >= 1");
    }
}

std::vector<Task> enumerate_tasks(const SweepConfig& config) {
    std::vector<Task> tasks;
    tasks.reserve(config.expected_records());
    for (const int E : config.embedding_dims) {
        for (const int tau : config.delays) {
            for (const Direction d : config.directions) {
                for (const std::size_t L : config.library_sizes) {
                    for (std::size_t rep = 0; rep < config.replicates; ++rep) {
                        tasks.push_back({d, E, tau, L, rep});
                    }
                }
            }
        }
    }
    return tasks;
}

SweepResult run_sweep(const TimeSeries& x, const TimeSeries& y, const SweepConfig& config) {
    if (x.size() != y.size()) {
        throw Error(Errc::LengthMismatch, "series '" + x.name() + "' and '" + y.name() +
                                              "' differ in length");
    }
    validate_config(config, x.size());
    const auto tasks = enumerate_tasks(config);
    const PipelineFactory factory = [&x, &y, seed = config.seed](EmbeddingParams params) {
        return PipelineState(x, y, params, seed);
    };
    auto executed = execute(tasks, factory, config.mode);
    return {std::move(executed.records), std::move(executed.metrics)};
}

const ConvergenceCell* ConvergenceSummary::find(Direction d, int E, int tau) const noexcept {
    for (const auto& cell : cells) {
        if (cell.direction == d && cell.E == E && cell.tau == tau) {
            return &cell;
        }
    }
    return nullptr;
}

std::vector<ConvergenceCell> aggregate_skill(std::span<const SkillRecord> records) {
    using CellKey = std::tuple<Direction, int, int>;
    std::map<CellKey, std::map<std::size_t, std::vector<double>>> grouped;
    for (const auto& r : records) {
        grouped[{r.direction, r.E, r.tau}][r.L].push_back(r.rho);
    }

    std::vector<ConvergenceCell> cells;
    cells.reserve(grouped.size());
    for (const auto& [key, by_library] : grouped) {
        const auto& [direction, E, tau] = key;
        ConvergenceCell cell{direction, E, tau, {}, 0.0, false};
        for (const auto& [L, rhos] : by_library) {
            LevelStats level{L, rhos.size(), 0.0, 0.0};
            level.mean = std::accumulate(rhos.begin(), rhos.end(), 0.0) /
                         static_cast<double>(rhos.size());
            if (rhos.size() > 1) {
                double ss = 0.0;
                for (const double v : rhos) {
                    ss += (v - level.mean) * (v - level.mean);
                }
                level.sd = std::sqrt(ss / static_cast<double>(rhos.size() - 1));
            }
            cell.levels.push_back(level);
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

ConvergenceSummary summarize_convergence(std::span<const SkillRecord> records, double min_delta) {
    ConvergenceSummary summary;
    summary.min_delta = min_delta;
    summary.cells = aggregate_skill(records);
    for (auto& cell : summary.cells) {
        if (cell.levels.size() < 2) {
            throw Error(Errc::InsufficientLValues,
                        "cell (" + std::string(to_string(cell.direction)) +
                            ", E=" + std::to_string(cell.E) + ", tau=" + std::to_string(cell.tau) +
                            ") has " + std::to_string(cell.levels.size()) + " distinct L value(s)");
        }
        const double first = cell.levels.front().mean;
        const double last = cell.levels.back().mean;
        cell.delta_rho = last - first;
        cell.converged = cell.delta_rho > min_delta && last > 0.0;
    }
    return summary;
}

}  // namespace ccm
