#include "ccm/app/bench.hpp"

#include "ccm/app/report.hpp"
#include "ccm/engine.hpp"
#include "ccm/error.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>

namespace ccm::app {

namespace {

constexpr std::size_t kBaselineLength = 4000;
constexpr std::size_t kBaselineReplicates = 500;
constexpr std::array<long long, 3> kBaselineL{500, 1000, 2000};
constexpr std::array<int, 3> kBaselineE{1, 2, 4};
constexpr std::array<int, 3> kBaselineTau{1, 2, 4};
constexpr double kBenchCoupling = 0.1;

std::size_t scaled(double base, double scale, std::size_t floor) {
    return std::max(floor, static_cast<std::size_t>(std::llround(base * scale)));
}

std::string varied_parameter(const std::string& scenario) {
    if (scenario == "elasticity-L") {
        return "L";
    }
    if (scenario == "elasticity-E") {
        return "E";
    }
    if (scenario == "elasticity-tau") {
        return "tau";
    }
    return {};
}

std::vector<Strategy> default_modes(const std::string& scenario) {
    if (scenario == "modes") {
        return {Strategy::Naive, Strategy::Parallel, Strategy::Indexed, Strategy::IndexedAsync};
    }
    if (scenario == "baseline") {
        return {Strategy::IndexedAsync};
    }
    // Elasticity compares the single-threaded baseline with the full pipeline.
    return {Strategy::Naive, Strategy::IndexedAsync};
}

BenchPoint measure(const TimeSeries& x, const TimeSeries& y, const SweepConfig& config,
                   std::size_t repeats) {
    BenchPoint point;
    point.mode = config.mode.strategy;
    for (std::size_t i = 0; i < std::max<std::size_t>(1, repeats); ++i) {
        const auto start = std::chrono::steady_clock::now();
        const auto result = run_sweep(x, y, config);
        point.runs.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        point.tasks = result.metrics.task_count;
        point.table_builds = result.metrics.table_builds;
        point.peak_table_entries = result.metrics.peak_table_entries;
    }
    point.mean = std::accumulate(point.runs.begin(), point.runs.end(), 0.0) /
                 static_cast<double>(point.runs.size());
    return point;
}

}  // namespace

std::size_t scaled_length(double scale) { return scaled(kBaselineLength, scale, 100); }

SweepConfig scaled_baseline(double scale, std::optional<std::size_t> replicates) {
    if (!(scale > 0.0)) {
        throw Error(Errc::InvalidArgument, "scale must be positive");
    }
    SweepConfig config;
    config.replicates = replicates.value_or(scaled(kBaselineReplicates, scale, 1));
    for (const auto L : kBaselineL) {
        config.library_sizes.push_back(scaled(static_cast<double>(L), scale, 6));
    }
    config.embedding_dims.assign(kBaselineE.begin(), kBaselineE.end());
    config.delays.assign(kBaselineTau.begin(), kBaselineTau.end());
    return config;
}

const BenchPoint* BenchReport::find(Strategy mode, long long value) const noexcept {
    for (const auto& p : points) {
        if (p.mode == mode && p.value == value) {
            return &p;
        }
    }
    return nullptr;
}

const BenchRatio* BenchReport::ratio(const std::string& name) const noexcept {
    for (const auto& r : ratios) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

BenchReport run_bench(const BenchOptions& options) {
    const std::string parameter = varied_parameter(options.scenario);
    if (parameter.empty() && options.scenario != "baseline" && options.scenario != "modes") {
        throw Error(Errc::UnknownScenario,
                    "'" + options.scenario +
                        "' (expected baseline, modes, elasticity-L, elasticity-E, elasticity-tau)");
    }

    BenchReport report;
    report.options = options;
    if (report.options.modes.empty()) {
        report.options.modes = default_modes(options.scenario);
    }
    report.series_length = options.series_length.value_or(scaled_length(options.scale));
    report.base = scaled_baseline(options.scale, options.replicates);
    report.base.seed = options.seed;
    report.base.mode.workers = options.workers;
    report.base.mode.pipelines_in_flight = options.pipelines_in_flight;

    const auto [x, y] =
        generate_coupled_logistic(report.series_length, kBenchCoupling, 0.0, options.seed);

    auto with_mode = [&](SweepConfig config, Strategy mode) {
        config.mode.strategy = mode;
        return config;
    };

    if (parameter.empty()) {
        for (const auto mode : report.options.modes) {
            report.points.push_back(measure(x, y, with_mode(report.base, mode), options.repeats));
        }
        const std::array<std::pair<Strategy, Strategy>, 6> pairs{{
            {Strategy::Parallel, Strategy::Naive},
            {Strategy::Indexed, Strategy::Naive},
            {Strategy::IndexedAsync, Strategy::Naive},
            {Strategy::Indexed, Strategy::Parallel},
            {Strategy::IndexedAsync, Strategy::Parallel},
            {Strategy::IndexedAsync, Strategy::Indexed},
        }};
        for (const auto& [num, den] : pairs) {
            const auto* a = report.find(num);
            const auto* b = report.find(den);
            if (a != nullptr && b != nullptr) {
                report.ratios.push_back({std::string(to_string(num)) + "/" +
                                             std::string(to_string(den)),
                                         static_cast<std::size_t>(a - report.points.data()),
                                         static_cast<std::size_t>(b - report.points.data()),
                                         a->mean / b->mean});
            }
        }
        return report;
    }

    std::vector<long long> values = options.values;
    if (values.empty()) {
        if (parameter == "L") {
            values.assign(report.base.library_sizes.begin(), report.base.library_sizes.end());
        } else if (parameter == "E") {
            values.assign(kBaselineE.begin(), kBaselineE.end());
        } else {
            values.assign(kBaselineTau.begin(), kBaselineTau.end());
        }
    }
    for (const auto mode : report.options.modes) {
        const std::size_t first = report.points.size();
        for (const long long v : values) {
            SweepConfig config = with_mode(report.base, mode);
            if (parameter == "L") {
                config.library_sizes = {static_cast<std::size_t>(v)};
            } else if (parameter == "E") {
                config.embedding_dims = {static_cast<int>(v)};
            } else {
                config.delays = {static_cast<int>(v)};
            }
            auto point = measure(x, y, config, options.repeats);
            point.parameter = parameter;
            point.value = v;
            report.points.push_back(std::move(point));
        }
        for (std::size_t i = first + 1; i < report.points.size(); ++i) {
            const auto& prev = report.points[i - 1];
            const auto& cur = report.points[i];
            report.ratios.push_back({std::string(to_string(mode)) + " " + parameter + " " +
                                         std::to_string(prev.value) + "->" +
                                         std::to_string(cur.value),
                                     i, i - 1, cur.mean / prev.mean});
        }
    }
    return report;
}

nlohmann::json to_json(const BenchReport& report) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report.points) {
        points.push_back({
            {"mode", std::string(to_string(p.mode))},
            {"parameter", p.parameter},
            {"value", p.value},
            {"runs_seconds", p.runs},
            {"mean_seconds", p.mean},
            {"tasks", p.tasks},
            {"table_builds", p.table_builds},
            {"peak_table_entries", p.peak_table_entries},
        });
    }
    nlohmann::json ratios = nlohmann::json::array();
    for (const auto& r : report.ratios) {
        ratios.push_back({
            {"name", r.name},
            {"numerator", r.numerator},
            {"denominator", r.denominator},
            {"value", r.value},
        });
    }
    auto config = to_json(report.base);
    config.erase("mode");
    return {
        {"schema", kSchemaVersion},
        {"scenario", report.options.scenario},
        {"scale", report.options.scale},
        {"workers", report.options.workers},
        {"repeats", report.options.repeats},
        {"series_length", report.series_length},
        {"baseline", config},
        {"points", points},
        {"ratios", ratios},
    };
}

}  // namespace ccm::app
