#include "skylease/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "skylease/errors.hpp"

namespace skylease {

using json = nlohmann::ordered_json;

void SimConfig::validate() const {
    build_scenario(scenario.grid, scenario.nodes, scenario.phys, scenario.priorities);
    learning.validate();
    run.validate();
}

PresetStructure structure_of(const SimConfig& cfg) {
    PresetStructure s;
    s.grid_cells = cfg.scenario.grid.num_cells();
    s.regions = cfg.scenario.grid.num_regions();
    s.region_r1 = cfg.scenario.grid.region_r1;
    s.region_r2 = cfg.scenario.grid.region_r2;
    s.states = cfg.scenario.grid.states_per_region();
    s.qtable_size = s.states * kNumActions;
    s.runs = cfg.run.runs;
    s.episodes = cfg.run.episodes;
    s.steps = cfg.run.steps;
    return s;
}

namespace {

struct PresetRow {
    const char* name;
    int grid;     // square grid edge
    int region;   // square region edge
    int steps;
};

// One row per published configuration column: grid edge, region edge, steps.
// All presets run 20 iterations of 40 episodes with 5 UAVs.
constexpr PresetRow kPresets[] = {
    {"table1-9x9", 9, 3, 75},
    {"table1-16x16", 16, 4, 125},
    {"table1-27x27", 27, 9, 600},
    {"table1-32x32-64regions", 32, 4, 125},
    {"table1-32x32-16regions", 32, 8, 500},
    {"table1-64x64-256regions", 64, 4, 125},
    {"table1-64x64-64regions", 64, 8, 500},
    {"table1-64x64-16regions", 64, 16, 2000},
    {"table1-81x81-81regions", 81, 9, 600},
    {"table1-81x81-9regions", 81, 27, 6000},
};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

bool is_preset(const std::string& name) {
    for (const auto& p : kPresets)
        if (name == p.name) return true;
    return false;
}

SimConfig make_preset(const std::string& name, std::uint64_t seed) {
    const PresetRow* row = nullptr;
    for (const auto& p : kPresets)
        if (name == p.name) row = &p;
    if (!row) {
        std::string known;
        for (const auto& p : kPresets) {
            known += known.empty() ? "" : ", ";
            known += p.name;
        }
        throw ValidationError("unknown preset: " + name + " (available: " + known + ")");
    }

    ScenarioTemplate tmpl;
    tmpl.grid.length_l1 = row->grid;
    tmpl.grid.length_l2 = row->grid;
    tmpl.grid.region_r1 = row->region;
    tmpl.grid.region_r2 = row->region;
    tmpl.grid.uav_altitude = 1.0;
    tmpl.grid.cell_pitch = 1.0;
    tmpl.phys.p_pt = 0.01;        // 10 mW
    tmpl.phys.p_uav = 0.02;       // 20 mW
    tmpl.phys.noise_power = 1e-9; // 1 nW
    tmpl.phys.path_loss_exponent = 2.0;
    tmpl.phys.psi_move = 10.0;    // J per movement
    tmpl.phys.psi_tx = 0.5;       // J per transmission
    tmpl.n_uavs = 5;

    SimConfig cfg;
    cfg.name = name;
    cfg.scenario = random_scenario(seed, tmpl);
    cfg.learning.alpha = 0.1;
    cfg.learning.gamma = 0.3;
    cfg.learning.epsilon = 0.1;
    cfg.learning.beta1 = 1.0;
    cfg.learning.beta2 = 0.25;
    cfg.learning.beta3 = -0.04;
    cfg.run.runs = 20;
    cfg.run.episodes = 40;
    cfg.run.steps = row->steps;
    cfg.run.mode = 0;
    cfg.run.master_seed = seed;
    return cfg;
}

namespace {

json to_json(const Position3D& p) { return json{{"x", p.x}, {"y", p.y}, {"z", p.z}}; }

Position3D position_from(const json& j) {
    return Position3D{j.at("x").get<double>(), j.at("y").get<double>(),
                      j.at("z").get<double>()};
}

}  // namespace

std::string config_to_json(const SimConfig& cfg) {
    json j;
    j["name"] = cfg.name;

    json grid;
    grid["length_l1"] = cfg.scenario.grid.length_l1;
    grid["length_l2"] = cfg.scenario.grid.length_l2;
    grid["region_r1"] = cfg.scenario.grid.region_r1;
    grid["region_r2"] = cfg.scenario.grid.region_r2;
    grid["uav_altitude"] = cfg.scenario.grid.uav_altitude;
    grid["cell_pitch"] = cfg.scenario.grid.cell_pitch;

    json nodes;
    nodes["primary_tx"] = to_json(cfg.scenario.nodes.primary_tx);
    nodes["primary_rx"] = to_json(cfg.scenario.nodes.primary_rx);
    nodes["emergency_center"] = to_json(cfg.scenario.nodes.emergency_center);
    nodes["uav_initial_cells"] = cfg.scenario.nodes.uav_initial_cells;
    nodes["uav_initial_energy"] = cfg.scenario.nodes.uav_initial_energy;

    json phys;
    phys["p_pt"] = cfg.scenario.phys.p_pt;
    phys["p_uav"] = cfg.scenario.phys.p_uav;
    phys["noise_power"] = cfg.scenario.phys.noise_power;
    phys["path_loss_exponent"] = cfg.scenario.phys.path_loss_exponent;
    phys["psi_move"] = cfg.scenario.phys.psi_move;
    phys["psi_tx"] = cfg.scenario.phys.psi_tx;

    json weights = json::object();
    for (const auto& [region, w] : cfg.scenario.priorities.weights)
        weights[std::to_string(region)] = w;

    j["scenario"] = json{{"grid", grid},
                         {"nodes", nodes},
                         {"phys", phys},
                         {"priorities", json{{"weights", weights}}}};

    j["learning"] = json{{"alpha", cfg.learning.alpha},   {"gamma", cfg.learning.gamma},
                         {"epsilon", cfg.learning.epsilon}, {"beta1", cfg.learning.beta1},
                         {"beta2", cfg.learning.beta2},   {"beta3", cfg.learning.beta3}};

    json run;
    run["runs"] = cfg.run.runs;
    run["episodes"] = cfg.run.episodes;
    run["steps"] = cfg.run.steps;
    run["mode"] = cfg.run.mode;
    if (std::isinf(cfg.run.dynamicity_threshold))
        run["dynamicity_threshold"] = nullptr;
    else
        run["dynamicity_threshold"] = cfg.run.dynamicity_threshold;
    run["lifetime_mode"] = cfg.run.lifetime_mode;
    run["master_seed"] = cfg.run.master_seed;
    json schedule = json::array();
    for (const auto& ev : cfg.run.schedule)
        schedule.push_back(json{{"episode", ev.episode},
                                {"signal", ev.signal},
                                {"primary_rx_cell", ev.primary_rx_cell}});
    run["schedule"] = schedule;
    j["run"] = run;

    return j.dump(2) + "\n";
}

SimConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        SimConfig cfg;
        cfg.name = j.value("name", "custom");

        const json& sc = j.at("scenario");
        const json& grid = sc.at("grid");
        cfg.scenario.grid.length_l1 = grid.at("length_l1").get<int>();
        cfg.scenario.grid.length_l2 = grid.at("length_l2").get<int>();
        cfg.scenario.grid.region_r1 = grid.at("region_r1").get<int>();
        cfg.scenario.grid.region_r2 = grid.at("region_r2").get<int>();
        cfg.scenario.grid.uav_altitude = grid.at("uav_altitude").get<double>();
        cfg.scenario.grid.cell_pitch = grid.at("cell_pitch").get<double>();

        const json& nodes = sc.at("nodes");
        cfg.scenario.nodes.primary_tx = position_from(nodes.at("primary_tx"));
        cfg.scenario.nodes.primary_rx = position_from(nodes.at("primary_rx"));
        cfg.scenario.nodes.emergency_center = position_from(nodes.at("emergency_center"));
        cfg.scenario.nodes.uav_initial_cells =
            nodes.at("uav_initial_cells").get<std::vector<int>>();
        cfg.scenario.nodes.uav_initial_energy =
            nodes.at("uav_initial_energy").get<std::vector<double>>();

        const json& phys = sc.at("phys");
        cfg.scenario.phys.p_pt = phys.at("p_pt").get<double>();
        cfg.scenario.phys.p_uav = phys.at("p_uav").get<double>();
        cfg.scenario.phys.noise_power = phys.at("noise_power").get<double>();
        cfg.scenario.phys.path_loss_exponent = phys.at("path_loss_exponent").get<double>();
        cfg.scenario.phys.psi_move = phys.at("psi_move").get<double>();
        cfg.scenario.phys.psi_tx = phys.at("psi_tx").get<double>();

        for (const auto& [key, value] : sc.at("priorities").at("weights").items())
            cfg.scenario.priorities.weights[std::stoi(key)] = value.get<double>();

        const json& learn = j.at("learning");
        cfg.learning.alpha = learn.at("alpha").get<double>();
        cfg.learning.gamma = learn.at("gamma").get<double>();
        cfg.learning.epsilon = learn.at("epsilon").get<double>();
        cfg.learning.beta1 = learn.at("beta1").get<double>();
        cfg.learning.beta2 = learn.at("beta2").get<double>();
        cfg.learning.beta3 = learn.at("beta3").get<double>();

        const json& run = j.at("run");
        cfg.run.runs = run.at("runs").get<int>();
        cfg.run.episodes = run.at("episodes").get<int>();
        cfg.run.steps = run.at("steps").get<int>();
        cfg.run.mode = run.at("mode").get<int>();
        if (run.contains("dynamicity_threshold") && !run.at("dynamicity_threshold").is_null())
            cfg.run.dynamicity_threshold = run.at("dynamicity_threshold").get<double>();
        cfg.run.lifetime_mode = run.value("lifetime_mode", false);
        cfg.run.master_seed = run.at("master_seed").get<std::uint64_t>();
        if (run.contains("schedule"))
            for (const auto& ev : run.at("schedule"))
                cfg.run.schedule.push_back(DynamicityEvent{
                    ev.at("episode").get<int>(), ev.at("signal").get<double>(),
                    ev.value("primary_rx_cell", -1)});
        return cfg;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: missing or mistyped field: ") + e.what());
    }
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void save_config(const SimConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("config: cannot write " + path);
    out << config_to_json(cfg);
}

std::uint64_t config_hash(const SimConfig& cfg) {
    const std::string dump = config_to_json(cfg);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string config_hash_hex(const SimConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return std::string(buf, 8);
}

}  // namespace skylease
