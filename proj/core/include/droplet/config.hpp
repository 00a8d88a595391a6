#pragma once

#include <cstdint>
#include <string>

#include "droplet/potential.hpp"

namespace droplet {

/// Single JSON run configuration shared by every CLI subcommand.
/// Unknown keys are rejected (naming the JSON path), every default is
/// pinned here, and duplicate keys are a parse error.
struct RunConfig {
    Potential potential = Potential::gaussian();
    double box = 4.0; // grid half-width L
    int nodes = 512;  // grid nodes per side M

    double tau = 1.0;
    int N = 16;
    long steps = 2'000'000;
    long burn_in = -1; // < 0: sampler default (200 N)
    std::uint64_t seed = 1;
    int chains = 4;
    int restarts = 8;

    double mass_rel_tol = 1e-3; // obstacle mass-matching tolerance
    double psor_tol = 1e-9;     // PSOR sweep convergence tolerance

    std::string output_dir = ".";

    /// Effective configuration (defaults filled) as a JSON string.
    std::string effective_json() const;
};

/// Parse and validate; throws ConfigError naming the offending JSON path.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Writes effective_config.json into the config's output directory.
void echo_effective_config(const RunConfig& cfg);

} // namespace droplet
