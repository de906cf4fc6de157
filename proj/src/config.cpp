#include "ifs/config.hpp"

#include <cmath>
#include <numbers>

namespace ifs {

using nlohmann::json;

json homeo_to_json(const Homeo& h) {
    json j;
    switch (h.kind()) {
        case Homeo::Kind::Rotation:
            j["type"] = "rotation";
            j["angle"] = h.rotation_angle();
            break;
        case Homeo::Kind::Sine: {
            auto [a, b] = h.sine_params();
            j["type"] = "sine";
            j["a"] = a;
            j["b"] = b;
            break;
        }
        case Homeo::Kind::PiecewiseLinear: {
            j["type"] = "pl";
            json knots = json::array();
            for (const auto& [t, v] : h.pl_knots()) knots.push_back(json::array({t, v}));
            j["knots"] = std::move(knots);
            break;
        }
        case Homeo::Kind::InverseOf:
            j["type"] = "inverse";
            j["of"] = homeo_to_json(h.inverse_inner());
            break;
    }
    return j;
}

Homeo homeo_from_json(const json& j) {
    if (!j.contains("type")) throw ConfigError("generator: missing \"type\"");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "rotation") return Homeo::rotation(j.at("angle").get<double>());
        if (type == "sine")
            return Homeo::sine_perturbed(j.at("a").get<double>(), j.at("b").get<double>());
        if (type == "pl") {
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : j.at("knots"))
                knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
            return Homeo::piecewise_linear(knots);
        }
        if (type == "inverse") return homeo_from_json(j.at("of")).inverse();
    } catch (const json::exception& e) {
        throw ConfigError("generator (" + type + "): " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("generator (" + type + "): " + e.what());
    }
    throw ConfigError("generator: unknown type \"" + type + "\"");
}

json system_to_json(const IFSystem& sys) {
    json j;
    j["generators"] = json::array();
    for (const auto& g : sys.generators) j["generators"].push_back(homeo_to_json(g));
    j["probs"] = sys.probs;
    return j;
}

IFSystem system_from_json(const json& j) {
    IFSystem sys;
    if (!j.contains("generators")) throw ConfigError("system: missing \"generators\"");
    if (!j.contains("probs")) throw ConfigError("system: missing \"probs\"");
    for (const auto& g : j.at("generators")) sys.generators.push_back(homeo_from_json(g));
    for (const auto& p : j.at("probs")) sys.probs.push_back(p.get<double>());
    return sys;
}

TestFunction function_from_json(const json& j) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (j.is_null()) return {[](double x) { return std::cos(2.0 * std::numbers::pi * x); }, "cos(2 pi x)"};
    const std::string type = j.value("type", "cosine");
    if (type == "cosine") {
        int k = j.value("harmonic", 1);
        return {[k, two_pi](double x) { return std::cos(two_pi * k * x); },
                "cos(2 pi " + std::to_string(k) + " x)"};
    }
    if (type == "sine") {
        int k = j.value("harmonic", 1);
        return {[k, two_pi](double x) { return std::sin(two_pi * k * x); },
                "sin(2 pi " + std::to_string(k) + " x)"};
    }
    if (type == "constant") {
        double c = j.value("value", 1.0);
        return {[c](double) { return c; }, "const " + std::to_string(c)};
    }
    if (type == "grid") {
        auto values = j.at("values").get<std::vector<double>>();
        GridFunction g(values);
        return {[g](double x) { return g.interp(x); },
                "grid[" + std::to_string(values.size()) + "]"};
    }
    throw ConfigError("function: unknown type \"" + type + "\"");
}

ParticleMeasure measure_from_json(const json& j) {
    const std::string type = j.value("type", "");
    if (type == "dirac") return ParticleMeasure::dirac(j.at("x").get<double>());
    if (type == "uniform") return ParticleMeasure::uniform_lattice(j.at("n").get<long>());
    if (type == "atoms") {
        ParticleMeasure mu;
        mu.positions = j.at("positions").get<std::vector<double>>();
        for (double& p : mu.positions) p = wrap01(p);
        mu.weights = j.at("weights").get<std::vector<double>>();
        return mu;
    }
    throw ConfigError("init measure: unknown type \"" + type + "\"");
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;
    if (!j.contains("system")) throw ConfigError("missing \"system\"");
    cfg.system = system_from_json(j.at("system"));
    if (!j.contains("experiment")) throw ConfigError("missing \"experiment\"");
    cfg.experiment = j.at("experiment").get<std::string>();
    static const char* kKnown[] = {"validate", "classify", "stability", "symmetry",
                                   "omega",    "slln",     "eproperty"};
    bool known = false;
    for (const char* k : kKnown) known = known || cfg.experiment == k;
    if (!known) throw ConfigError("experiment: unknown value \"" + cfg.experiment + "\"");
    if (!j.contains("seed")) throw ConfigError("missing \"seed\" (no nondeterministic default)");
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
        throw ConfigError("seed: must be an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.parameters = j.value("parameters", json::object());
    for (auto it = cfg.parameters.begin(); it != cfg.parameters.end(); ++it) {
        if (it.value().is_number() && it.value().get<double>() < 0.0)
            throw ConfigError("parameters." + it.key() + ": must not be negative");
    }
    cfg.output_dir = j.value("output_dir", "");
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace ifs
