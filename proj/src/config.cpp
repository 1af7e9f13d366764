#include "wban/config.hpp"

#include <fstream>
#include <sstream>

#include "wban/rng.hpp"

namespace wban {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double config_double(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const ParseError&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::int64_t config_int(const std::string& key, const std::string& value) {
    try {
        return parse_int(value);
    } catch (const ParseError&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
}

std::uint64_t config_u64(const std::string& key, const std::string& value) {
    const std::int64_t v = config_int(key, value);
    if (v < 0) throw ConfigError("key '" + key + "': expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

// Grid syntax: either "a,b,c" or "start:step:stop" (stop inclusive up to a
// half-step of rounding slack).
std::vector<double> parse_grid(const std::string& key, const std::string& value) {
    std::vector<double> grid;
    if (value.find(':') != std::string::npos) {
        std::istringstream ss(value);
        std::string part;
        std::vector<double> parts;
        while (std::getline(ss, part, ':')) parts.push_back(config_double(key, trim(part)));
        if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
            throw ConfigError("key '" + key + "': range must be start:step:stop");
        }
        for (double v = parts[0]; v <= parts[2] + parts[1] * 0.5; v += parts[1]) {
            grid.push_back(v);
        }
    } else {
        std::istringstream ss(value);
        std::string part;
        while (std::getline(ss, part, ',')) grid.push_back(config_double(key, trim(part)));
    }
    if (grid.empty()) {
        throw ConfigError("key '" + key + "': grid must be non-empty");
    }
    return grid;
}

}  // namespace

void set_config_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "input") {
        c.input = value;
    } else if (key == "profile") {
        c.profile = value;
    } else if (key == "steps") {
        const std::int64_t v = config_int(key, value);
        if (v < 1) throw ConfigError("key 'steps': must be at least 1");
        c.steps = static_cast<std::size_t>(v);
    } else if (key == "seed") {
        c.seed = config_u64(key, value);
    } else if (key == "out") {
        c.out_dir = value;
    } else if (key == "decisions") {
        c.write_decisions = config_bool(key, value);
    } else if (key == "tier1.epsilon") {
        c.filter.epsilon = config_double(key, value);
    } else if (key == "tier1.low_z") {
        c.filter.low_z = config_double(key, value);
    } else if (key == "tier1.high_z") {
        c.filter.high_z = config_double(key, value);
    } else if (key == "tier1.reset_period_steps") {
        c.filter.reset_period_steps = config_int(key, value);
    } else if (key == "tier1.warmup_count") {
        c.filter.warmup_count = config_int(key, value);
    } else if (key == "tier1.variance_floor") {
        c.filter.variance_floor = config_double(key, value);
    } else if (key == "tier1.ack_interval_steps") {
        c.filter.ack_interval_steps = config_int(key, value);
    } else if (key.starts_with("attr.")) {
        const auto rest = key.substr(5);
        const auto dot = rest.rfind('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size()) {
            throw ConfigError("per-attribute key must look like attr.<name>.<field>: '" + key +
                              "'");
        }
        const std::string name = rest.substr(0, dot);
        const std::string field = rest.substr(dot + 1);
        FilterOverride& ov = c.attribute_overrides[name];
        if (field == "epsilon") {
            ov.epsilon = config_double(key, value);
        } else if (field == "low_z") {
            ov.low_z = config_double(key, value);
        } else if (field == "high_z") {
            ov.high_z = config_double(key, value);
        } else {
            throw ConfigError("unknown per-attribute field '" + field + "' in key '" + key + "'");
        }
    } else if (key == "tier2.omega") {
        const std::int64_t v = config_int(key, value);
        if (v < 2) throw ConfigError("key 'tier2.omega': must be at least 2");
        c.tier2.omega = static_cast<std::size_t>(v);
    } else if (key == "tier2.n_tree") {
        const std::int64_t v = config_int(key, value);
        if (v < 1) throw ConfigError("key 'tier2.n_tree': must be at least 1");
        c.tier2.n_tree = static_cast<std::size_t>(v);
    } else if (key == "tier2.k_tree") {
        const std::int64_t v = config_int(key, value);
        if (v < 1) throw ConfigError("key 'tier2.k_tree': must be at least 1");
        c.tier2.k_tree = static_cast<std::size_t>(v);
    } else if (key == "tier2.score_threshold") {
        c.tier2.score_threshold = config_double(key, value);
    } else if (key == "tier2.seed") {
        c.tier2.rng_seed = config_u64(key, value);
        c.tier2_seed_pinned = true;
    } else if (key == "inject.rate") {
        c.injection.rate = config_double(key, value);
        c.injection_enabled = c.injection.rate > 0.0;
    } else if (key == "inject.magnitude_sigma") {
        c.injection.magnitude_sigma = config_double(key, value);
    } else if (key == "inject.dims_per_event") {
        const std::int64_t v = config_int(key, value);
        if (v < 1) throw ConfigError("key 'inject.dims_per_event': must be at least 1");
        c.injection.dims_per_event = static_cast<std::size_t>(v);
    } else if (key == "inject.seed") {
        c.injection.rng_seed = config_u64(key, value);
        c.injection_seed_pinned = true;
    } else if (key == "energy.voltage") {
        c.energy.voltage_V = config_double(key, value);
    } else if (key == "energy.bytes_per_datapoint") {
        c.energy.bytes_per_datapoint = config_int(key, value);
    } else if (key == "energy.instruction_energy") {
        c.energy.instruction_energy_J = config_double(key, value);
    } else if (key == "energy.instructions_per_assessment") {
        c.instructions_per_assessment = config_int(key, value);
    } else if (key == "sweep.grid") {
        c.sweep_grid = parse_grid(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void ExperimentConfig::resolve() {
    // Sub-streams: 0 = generator, 1 = injector, 2 = detector. Derivation
    // keeps them independent of each other and of the master stream.
    if (!tier2_seed_pinned) {
        tier2.rng_seed = derive_seed(seed, 2);
    }
    if (!injection_seed_pinned) {
        injection.rng_seed = derive_seed(seed, 1);
    }
    if (sweep_grid.empty()) {
        for (int i = 1; i <= 20; ++i) {
            sweep_grid.push_back(0.05 * i);
        }
    }
}

void ExperimentConfig::validate() const {
    filter.validate();
    tier2.validate();
    energy.validate();
    if (injection_enabled) {
        if (!(injection.rate >= 0.0 && injection.rate <= 1.0)) {
            throw ConfigError("inject.rate must lie in [0, 1]");
        }
        if (!(injection.magnitude_sigma > 0.0)) {
            throw ConfigError("inject.magnitude_sigma must be positive");
        }
    }
    if (instructions_per_assessment < 0) {
        throw ConfigError("energy.instructions_per_assessment must be non-negative");
    }
    if (input == "synthetic" && profile != "vitals" && profile != "drifting") {
        throw ConfigError("profile must be 'vitals' or 'drifting', got '" + profile + "'");
    }
    if (out_dir.empty()) {
        throw ConfigError("output directory must be non-empty");
    }
    for (const auto& [name, ov] : attribute_overrides) {
        filter_for(name).validate();
    }
}

FilterParams ExperimentConfig::filter_for(const std::string& attribute_name) const {
    FilterParams p = filter;
    const auto it = attribute_overrides.find(attribute_name);
    if (it != attribute_overrides.end()) {
        if (it->second.epsilon) p.epsilon = *it->second.epsilon;
        if (it->second.low_z) p.low_z = *it->second.low_z;
        if (it->second.high_z) p.high_z = *it->second.high_z;
    }
    return p;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + " line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        } else {
            const auto hash = value.find('#');
            if (hash != std::string::npos) value = trim(value.substr(0, hash));
        }
        if (key.empty()) {
            throw ConfigError(origin + " line " + std::to_string(line_no) + ": empty key");
        }
        try {
            set_config_key(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

}  // namespace wban
