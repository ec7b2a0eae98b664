#pragma once

#include "ccm/sweep.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccm::app {

/// Desk-scale reproduction of the timing experiments. The baseline is a
/// 4000-sample coupled logistic pair, r = 500, L in {500, 1000, 2000},
/// E and tau in {1, 2, 4}; `scale` shrinks N, r and the L grid together.
struct BenchOptions {
    std::string scenario = "baseline";  // baseline, modes, elasticity-L, elasticity-E, elasticity-tau
    double scale = 1.0;
    std::size_t workers = 1;
    std::size_t repeats = 3;
    std::size_t pipelines_in_flight = 2;
    std::uint64_t seed = 42;
    std::vector<Strategy> modes;              // empty: scenario default
    std::optional<std::size_t> replicates;    // overrides the scaled r
    std::optional<std::size_t> series_length; // overrides the scaled N
    std::vector<long long> values;            // subset of the varied values (elasticity only)
};

struct BenchPoint {
    Strategy mode = Strategy::Naive;
    std::string parameter;  // varied parameter, empty for mode comparisons
    long long value = 0;
    std::vector<double> runs;  // wall seconds per repeat
    double mean = 0.0;
    std::size_t tasks = 0;
    std::size_t table_builds = 0;
    std::size_t peak_table_entries = 0;
};

struct BenchRatio {
    std::string name;
    std::size_t numerator = 0;    // index into points
    std::size_t denominator = 0;  // index into points
    double value = 0.0;
};

struct BenchReport {
    BenchOptions options;
    std::size_t series_length = 0;
    SweepConfig base;  // baseline grid after scaling
    std::vector<BenchPoint> points;
    std::vector<BenchRatio> ratios;

    const BenchPoint* find(Strategy mode, long long value = 0) const noexcept;
    const BenchRatio* ratio(const std::string& name) const noexcept;
};

/// The baseline sweep at the given scale (without mode), used by the
/// benchmark and the acceptance suite alike.
SweepConfig scaled_baseline(double scale, std::optional<std::size_t> replicates = std::nullopt);
std::size_t scaled_length(double scale);

/// Throws Error(UnknownScenario) for an unrecognized scenario name.
BenchReport run_bench(const BenchOptions& options);

nlohmann::json to_json(const BenchReport& report);

}  // namespace ccm::app
