#pragma once

#include "ccm/engine.hpp"
#include "ccm/runtime.hpp"
#include "ccm/sweep.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace ccm::app {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json to_json(const SweepConfig& config);
nlohmann::json to_json(const RunMetrics& metrics);

/// Summary document. Cells with a single L value carry levels but a null verdict.
nlohmann::json convergence_json(std::span<const SkillRecord> records, double min_delta);

struct InputDigest {
    std::string path;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    SweepConfig config;
    std::vector<InputDigest> inputs;
    std::string column_x;
    std::string column_y;
    std::size_t series_length = 0;
    RunMetrics metrics;
    std::string status = "completed";
};

nlohmann::json to_json(const RunManifest& manifest);

}  // namespace ccm::app
