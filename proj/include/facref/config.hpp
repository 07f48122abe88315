#pragma once

#include <filesystem>
#include <string>

#include "facref/params.hpp"

namespace facref {

/// Every tunable of the refinement pipeline; defaults are the published settings.
struct Config {
    UncertaintySpec uncertainty;
    GridParams grid;
    NeighborhoodSpec features;
    FusionParams fusion;
    BnParams bn;
    ShapeParams shape;
    ReconParams recon;
    EvalParams eval;
    SimParams sim;

    bool operator==(const Config&) const = default;
};

/// Range checks; throws ConfigError naming the offending key.
void validate_config(const Config& c);

/// Every key must be present; unknown keys are rejected.
Config read_config(const std::filesystem::path& path);
Config parse_config(const std::string& text);
void write_config(const Config& c, const std::filesystem::path& path);
std::string config_to_text(const Config& c);

}  // namespace facref
