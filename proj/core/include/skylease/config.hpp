#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skylease/engine.hpp"
#include "skylease/scenario.hpp"

namespace skylease {

// A fully resolved experiment: world, learning constants, run shape.
struct SimConfig {
    std::string name = "custom";
    Scenario scenario;
    LearningParams learning;
    RunConfig run;

    void validate() const;
};

// Structural description of a preset, matching the published configuration
// table row for row.
struct PresetStructure {
    int grid_cells = 0;
    int regions = 0;
    int region_r1 = 0;
    int region_r2 = 0;
    int states = 0;
    int qtable_size = 0;  // states x 5 actions
    int runs = 0;
    int episodes = 0;
    int steps = 0;
};

PresetStructure structure_of(const SimConfig& cfg);

// Bundled presets covering all ten published grid configurations. The seed
// drives scenario generation and the run's master seed.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
SimConfig make_preset(const std::string& name, std::uint64_t seed);

// JSON round-trip; field names match the domain types exactly.
std::string config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const std::string& text);
SimConfig load_config(const std::string& path);
void save_config(const SimConfig& cfg, const std::string& path);

// FNV-1a over the canonical JSON dump; names output directories.
std::uint64_t config_hash(const SimConfig& cfg);
std::string config_hash_hex(const SimConfig& cfg);

}  // namespace skylease
