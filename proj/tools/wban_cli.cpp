// wban: two-tier health-telemetry pipeline driver.
//
// Subcommands map one-to-one onto the experiments: `run` (filter + detector),
// `baseline` (filter bypassed), `sweep-epsilon` (threshold trade-off),
// `inject` (corrupt a dataset and emit labels), `report` (pretty-print a
// finished run).

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wban/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> assignments;  // raw key=value overrides
    std::optional<double> epsilon;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> input;
    std::optional<std::string> profile;
    std::optional<std::int64_t> steps;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("-c,--config", flags.config_path, "Experiment config file");
    cmd->add_option("--set", flags.assignments,
                    "Override any config key as key=value (repeatable)");
    cmd->add_option("--epsilon", flags.epsilon, "Transmit threshold (tier1.epsilon)");
    cmd->add_option("--seed", flags.seed, "Master random seed");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--input", flags.input, "Input CSV path, or 'synthetic'");
    cmd->add_option("--profile", flags.profile, "Synthetic profile: vitals | drifting");
    cmd->add_option("--steps", flags.steps, "Synthetic stream length");
}

wban::ExperimentConfig build_config(const CommonFlags& flags) {
    wban::ExperimentConfig config;
    if (!flags.config_path.empty()) {
        config = wban::load_config(flags.config_path);
    }
    for (const std::string& assignment : flags.assignments) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) {
            throw wban::ConfigError("--set expects key=value, got '" + assignment + "'");
        }
        wban::set_config_key(config, assignment.substr(0, eq), assignment.substr(eq + 1));
    }
    if (flags.epsilon) config.filter.epsilon = *flags.epsilon;
    if (flags.seed) config.seed = *flags.seed;
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.input) config.input = *flags.input;
    if (flags.profile) config.profile = *flags.profile;
    if (flags.steps) {
        if (*flags.steps < 1) throw wban::ConfigError("--steps must be at least 1");
        config.steps = static_cast<std::size_t>(*flags.steps);
    }
    config.resolve();
    return config;
}

void print_run_summary(const wban::ExperimentConfig& config, const wban::RunReport& report) {
    std::cout << "input: " << config.input;
    if (config.input == "synthetic") {
        std::cout << " (" << config.profile << ", " << config.steps << " steps)";
    }
    std::cout << ", seed " << config.seed << "\n\n";

    std::cout << std::left << std::setw(10) << "attribute" << std::right << std::setw(10)
              << "total" << std::setw(12) << "transmitted" << std::setw(14) << "uninteresting"
              << std::setw(8) << "faulty" << std::setw(10) << "discard%" << "\n";
    for (const wban::AttributeReport& attr : report.attributes) {
        std::cout << std::left << std::setw(10) << attr.name << std::right << std::setw(10)
                  << attr.total << std::setw(12) << attr.transmitted << std::setw(14)
                  << attr.uninteresting << std::setw(8) << attr.faulty << std::setw(10)
                  << std::fixed << std::setprecision(2) << attr.discard_pct() << "\n";
    }

    const wban::SavingsReport& e = report.energy;
    std::cout << "\nenergy: baseline " << std::setprecision(4) << e.baseline_J << " J, filtered "
              << e.total_J << " J (tx " << e.transmission_J << " + cpu " << e.computation_J
              << " + ack " << e.ack_J << "), saving " << std::setprecision(2)
              << 100.0 * e.saving_fraction << "%\n";

    if (report.detection) {
        const wban::DetectionReport& det = *report.detection;
        std::cout << "detection: precision " << std::setprecision(4) << det.metrics.precision
                  << ", recall " << det.metrics.recall << ", f1 " << det.metrics.f1;
        if (det.auc) std::cout << ", auc " << *det.auc;
        std::cout << " (tp " << det.counts.tp << " fp " << det.counts.fp << " fn "
                  << det.counts.fn << " tn " << det.counts.tn << ")\n";
    }
    std::cout << "alarms: " << report.alarms.size() << " interval(s)\n";
    std::cout << "scored points: " << report.scored_points;
    if (report.scored_points > 0) std::cout << " (from step " << report.first_scored_step << ")";
    std::cout << "\n";
    for (const std::string& note : report.notes) {
        std::cout << "note: " << note << "\n";
    }
    std::cout << "wall time: " << std::setprecision(2) << report.wall_seconds << " s\n";
    std::cout << "artifacts in " << config.out_dir << "/\n";
}

int cmd_report(const std::string& run_dir) {
    std::ifstream in(run_dir + "/report.json");
    if (!in) {
        throw wban::EmptyInput("cannot open " + run_dir + "/report.json");
    }
    nlohmann::json j;
    in >> j;

    std::cout << "run of input '" << j.value("input", std::string("?")) << "', seed "
              << j.value("seed", 0) << (j.value("baseline", false) ? " (baseline)" : "") << "\n";
    for (const auto& attr : j["attributes"]) {
        std::cout << "  " << std::left << std::setw(10)
                  << attr.value("name", std::string("?")) << std::right << " discard "
                  << std::fixed << std::setprecision(2) << attr.value("discard_pct", 0.0)
                  << "% (" << attr.value("transmitted", 0) << "/" << attr.value("total", 0)
                  << " transmitted)\n";
    }
    const auto& e = j["energy"];
    std::cout << "  energy saving " << std::setprecision(2)
              << 100.0 * e.value("saving_fraction", 0.0) << "% (" << std::setprecision(4)
              << e.value("total_J", 0.0) << " J vs " << e.value("baseline_J", 0.0) << " J)\n";
    if (!j["detection"].is_null()) {
        const auto& det = j["detection"];
        std::cout << "  detection f1 " << std::setprecision(4) << det.value("f1", 0.0);
        if (det.contains("auc")) std::cout << ", auc " << det.value("auc", 0.0);
        std::cout << "\n";
    }
    std::cout << "  " << j["alarms"].size() << " alarm interval(s), "
              << j.value("scored_points", 0) << " scored points\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-tier WBAN telemetry pipeline: sensor-side filtering and "
                 "gateway-side anomaly detection"};
    app.require_subcommand(1);

    CommonFlags run_flags, baseline_flags, sweep_flags, inject_flags;
    auto* run_cmd = app.add_subcommand("run", "Run the full filter + detector pipeline");
    add_common_flags(run_cmd, run_flags);
    auto* baseline_cmd =
        app.add_subcommand("baseline", "Run with the filter bypassed (transmit everything)");
    add_common_flags(baseline_cmd, baseline_flags);
    auto* sweep_cmd = app.add_subcommand(
        "sweep-epsilon", "Sweep the transmit threshold and report discard % and NMSE");
    add_common_flags(sweep_cmd, sweep_flags);
    auto* inject_cmd =
        app.add_subcommand("inject", "Write a corrupted copy of the input plus labels");
    add_common_flags(inject_cmd, inject_flags);

    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "Summarize a finished run directory");
    report_cmd->add_option("-r,--run", report_dir, "Run directory containing report.json")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are config errors
    }

    try {
        if (run_cmd->parsed()) {
            const auto config = build_config(run_flags);
            print_run_summary(config, wban::run_experiment(config));
        } else if (baseline_cmd->parsed()) {
            const auto config = build_config(baseline_flags);
            print_run_summary(config, wban::baseline_run(config));
        } else if (sweep_cmd->parsed()) {
            const auto config = build_config(sweep_flags);
            const auto rows = wban::sweep_experiment(config);
            std::cout << "epsilon  discard%  nmse\n";
            for (const wban::SweepRow& row : rows) {
                std::cout << std::fixed << std::setprecision(2) << std::setw(7) << row.epsilon
                          << std::setw(10) << row.discard_pct << std::setprecision(4)
                          << std::setw(8) << row.nmse << "\n";
            }
            std::cout << "wrote " << config.out_dir << "/sweep.csv\n";
        } else if (inject_cmd->parsed()) {
            const auto config = build_config(inject_flags);
            const auto result = wban::inject_experiment(config);
            std::int64_t labeled = 0;
            for (std::uint8_t l : result.labels) labeled += l;
            std::cout << "corrupted " << labeled << " of " << result.labels.size()
                      << " steps; wrote " << config.out_dir << "/corrupted.csv and labels.csv\n";
        } else if (report_cmd->parsed()) {
            return cmd_report(report_dir);
        }
    } catch (const wban::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wban::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
