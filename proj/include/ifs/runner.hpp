#pragma once

#include <string>

#include <json.hpp>

#include "ifs/config.hpp"

namespace ifs {

inline constexpr const char* kVersion = "circle-ifs 0.1.0";

// Exit codes shared by the runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitInconclusive = 4;

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    nlohmann::json summary;
};

// Dispatches the configured experiment and writes summary.json,
// series.csv and, when witness words exist, witness.json into
// output_dir. Outputs are a pure function of the configuration bytes.
RunOutcome run_config(const ExperimentConfig& cfg, const std::string& output_dir, int threads = 1);

}  // namespace ifs
