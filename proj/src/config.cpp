#include "blobtsp/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blobtsp::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        }
        kv[key] = value;
    }
    return kv;
}

void apply(const std::map<std::string, std::string>& kv, RunParams& params) {
    for (const auto& [key, value] : kv) {
        std::istringstream in(value);
        bool ok = true;
        if (key == "lattice_width") ok = static_cast<bool>(in >> params.lattice_width);
        else if (key == "lattice_height") ok = static_cast<bool>(in >> params.lattice_height);
        else if (key == "sensor_angle") ok = static_cast<bool>(in >> params.swarm.sensor_angle);
        else if (key == "rotation_angle") ok = static_cast<bool>(in >> params.swarm.rotation_angle);
        else if (key == "sensor_offset") ok = static_cast<bool>(in >> params.swarm.sensor_offset);
        else if (key == "deposit_amount") ok = static_cast<bool>(in >> params.swarm.deposit_amount);
        else if (key == "step_length") ok = static_cast<bool>(in >> params.swarm.step_length);
        else if (key == "division_period") ok = static_cast<bool>(in >> params.swarm.division_period);
        else if (key == "deletion_period") ok = static_cast<bool>(in >> params.swarm.deletion_period);
        else if (key == "division_window_min") ok = static_cast<bool>(in >> params.swarm.division_window_min);
        else if (key == "division_window_max") ok = static_cast<bool>(in >> params.swarm.division_window_max);
        else if (key == "survival_max") ok = static_cast<bool>(in >> params.swarm.survival_max);
        else if (key == "halting_half_width") ok = static_cast<bool>(in >> params.swarm.halting_half_width);
        else if (key == "halting_threshold") ok = static_cast<bool>(in >> params.swarm.halting_threshold);
        else if (key == "init_density") ok = static_cast<bool>(in >> params.swarm.init_density);
        else if (key == "rng_seed") ok = static_cast<bool>(in >> params.swarm.rng_seed);
        else if (key == "detect_radius") ok = static_cast<bool>(in >> params.detect_radius);
        else if (key == "max_steps") ok = static_cast<bool>(in >> params.max_steps);
        else throw std::runtime_error("unknown config key: " + key);
        if (!ok) throw std::runtime_error("bad value for " + key + ": " + value);
    }

    const auto& s = params.swarm;
    if (s.sensor_angle <= 0.0 || s.sensor_angle > 180.0 ||
        s.rotation_angle <= 0.0 || s.rotation_angle > 180.0) {
        throw std::runtime_error("sensor/rotation angle must be in (0, 180]");
    }
    if (s.sensor_offset < 3.0)
        throw std::runtime_error("sensor_offset must be >= 3");
    if (s.init_density <= 0.0 || s.init_density > 1.0)
        throw std::runtime_error("init_density must be in (0, 1]");
}

RunParams load_run_params(const std::string& path) {
    RunParams params;
    apply(parse_file(path), params);
    return params;
}

} // namespace blobtsp::config
