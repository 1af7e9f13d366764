#pragma once

// Experiment configuration: a flat `key = value` text file (comments with
// '#', optional quotes around values). Every key can also be set by a CLI
// flag, applied after the file so flags win. Seeds for the generator,
// injector, and detector are derived from the master seed unless pinned
// individually.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wban/energy.hpp"
#include "wban/evaluation.hpp"
#include "wban/iforest.hpp"
#include "wban/tier1.hpp"

namespace wban {

// Per-attribute relaxation of the global filter settings (e.g. a wider
// plausibility band for a noisy channel).
struct FilterOverride {
    std::optional<double> epsilon;
    std::optional<double> low_z;
    std::optional<double> high_z;
};

struct ExperimentConfig {
    std::string input = "synthetic";  // "synthetic" or a CSV path
    std::string profile = "vitals";   // synthetic profile: vitals | drifting
    std::size_t steps = 20000;        // synthetic stream length
    std::uint64_t seed = 0;           // master seed
    std::string out_dir = "out";

    FilterParams filter;
    std::map<std::string, FilterOverride> attribute_overrides;

    Tier2Params tier2;
    bool tier2_seed_pinned = false;

    InjectionSpec injection;
    bool injection_enabled = false;
    bool injection_seed_pinned = false;

    EnergyLedger energy;  // pricing defaults; counts stay zero here
    std::int64_t instructions_per_assessment = 74;

    std::vector<double> sweep_grid;  // defaults to 0.05..1.0 step 0.05
    bool write_decisions = true;

    // Fills derived seeds and the default sweep grid; call once after all
    // keys and flags are applied.
    void resolve();

    void validate() const;  // throws ConfigError

    // Global filter params with this attribute's overrides applied.
    FilterParams filter_for(const std::string& attribute_name) const;
};

// Applies one key=value pair; throws ConfigError on unknown keys or
// unparseable values. Shared by the file loader and the CLI flags.
void set_config_key(ExperimentConfig& config, const std::string& key, const std::string& value);

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

}  // namespace wban
