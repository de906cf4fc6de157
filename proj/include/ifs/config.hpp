#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ifs/measure.hpp"
#include "ifs/system.hpp"

namespace ifs {

// Invalid or missing configuration field; the message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json homeo_to_json(const Homeo& h);
Homeo homeo_from_json(const nlohmann::json& j);

nlohmann::json system_to_json(const IFSystem& sys);
IFSystem system_from_json(const nlohmann::json& j);

// Named test-function descriptors used for phi (averages) and f (dual
// iterates): cosine/sine harmonics, constants, or explicit grid values.
struct TestFunction {
    std::function<double(double)> fn;
    std::string spec;
};
TestFunction function_from_json(const nlohmann::json& j);

struct ExperimentConfig {
    IFSystem system;
    std::string experiment;  // validate | classify | stability | symmetry | omega | slln | eproperty
    nlohmann::json parameters;
    std::uint64_t seed = 0;
    std::string output_dir;
    nlohmann::json raw;
};

// Throws ConfigError naming the failing field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);

ParticleMeasure measure_from_json(const nlohmann::json& j);

}  // namespace ifs
