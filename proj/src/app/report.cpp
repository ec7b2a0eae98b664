#include "ccm/app/report.hpp"

namespace ccm::app {

using nlohmann::json;

json to_json(const SweepConfig& config) {
    json directions = json::array();
    for (const auto d : config.directions) {
        directions.push_back(std::string(to_string(d)));
    }
    return {
        {"r", config.replicates},
        {"L", config.library_sizes},
        {"E", config.embedding_dims},
        {"tau", config.delays},
        {"seed", config.seed},
        {"directions", directions},
        {"mode", std::string(to_string(config.mode.strategy))},
        {"workers", config.mode.effective_workers()},
        {"pipelines_in_flight", config.mode.pipelines_in_flight},
        {"expected_records", config.expected_records()},
    };
}

json to_json(const RunMetrics& metrics) {
    json pipelines = json::array();
    for (const auto& p : metrics.pipelines) {
        pipelines.push_back({
            {"E", p.params.E},
            {"tau", p.params.tau},
            {"tasks", p.tasks},
            {"table_builds", p.table_builds},
            {"start_seconds", p.start_seconds},
            {"build_seconds", p.build_seconds},
            {"task_seconds", p.task_seconds},
            {"end_seconds", p.end_seconds},
        });
    }
    return {
        {"table_build_seconds", metrics.table_build_seconds},
        {"sweep_seconds", metrics.sweep_seconds},
        {"task_count", metrics.task_count},
        {"table_builds", metrics.table_builds},
        {"peak_table_entries", metrics.peak_table_entries},
        {"workers", metrics.workers},
        {"pipelines", pipelines},
        {"completion_order", metrics.completion_order},
    };
}

json convergence_json(std::span<const SkillRecord> records, double min_delta) {
    json cells = json::array();
    for (const auto& cell : aggregate_skill(records)) {
        json levels = json::array();
        for (const auto& l : cell.levels) {
            levels.push_back({{"L", l.L}, {"n", l.count}, {"mean", l.mean}, {"sd", l.sd}});
        }
        json entry = {
            {"direction", std::string(to_string(cell.direction))},
            {"E", cell.E},
            {"tau", cell.tau},
            {"levels", levels},
            {"delta_rho", nullptr},
            {"converged", nullptr},
        };
        if (cell.levels.size() >= 2) {
            const double delta = cell.levels.back().mean - cell.levels.front().mean;
            entry["delta_rho"] = delta;
            entry["converged"] = delta > min_delta && cell.levels.back().mean > 0.0;
        }
        cells.push_back(std::move(entry));
    }
    return {{"schema", kSchemaVersion}, {"min_delta", min_delta}, {"cells", cells}};
}

json to_json(const RunManifest& manifest) {
    json inputs = json::array();
    for (const auto& in : manifest.inputs) {
        inputs.push_back({{"path", in.path}, {"sha256", in.sha256}, {"bytes", in.bytes}});
    }
    return {
        {"schema", kSchemaVersion},
        {"tool", "ccm"},
        {"version", kToolVersion},
        {"config", to_json(manifest.config)},
        {"columns", {{"x", manifest.column_x}, {"y", manifest.column_y}}},
        {"series_length", manifest.series_length},
        {"inputs", inputs},
        {"metrics", to_json(manifest.metrics)},
        {"status", manifest.status},
    };
}

}  // namespace ccm::app
