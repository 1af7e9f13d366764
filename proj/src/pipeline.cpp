#include "wban/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "wban/lpu.hpp"
#include "wban/rng.hpp"
#include "wban/synthetic.hpp"
#include "wban/tier1.hpp"

namespace wban {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_artifact(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw EmptyInput("cannot open output file: " + path.string());
    }
    return out;
}

ordered_json energy_json(const SavingsReport& e) {
    ordered_json j;
    j["baseline_J"] = e.baseline_J;
    j["transmission_J"] = e.transmission_J;
    j["computation_J"] = e.computation_J;
    j["ack_J"] = e.ack_J;
    j["total_J"] = e.total_J;
    j["saving_fraction"] = e.saving_fraction;
    j["negative_saving"] = e.negative_saving;
    return j;
}

struct Tier1Output {
    std::vector<AttributeReport> attributes;
    // Arrivals per step, already in dimension order within each step.
    std::vector<std::vector<ReceivedValue>> received_by_step;
    std::vector<EnergyLedger> per_sensor;  // billable counts per sensor
    std::int64_t total_readings = 0;
    std::int64_t transmitted_points = 0;
    std::int64_t assessments = 0;
};

Tier1Output run_tier1(const Dataset& data, const ExperimentConfig& config, bool force_transmit,
                      std::ofstream* decisions_csv) {
    const std::size_t dims = data.dimensions();
    const std::size_t steps = data.steps();
    const auto dim_pairs = enumerate_dimensions(data.topo);

    Tier1Output out;
    out.attributes.resize(dims);
    out.received_by_step.resize(steps);
    out.per_sensor.assign(data.topo.attributes_per_sensor.size(), config.energy);

    // Column-major pass is cache-friendly; arrival order within a step is
    // restored by pushing dimensions in ascending order per step below.
    std::vector<std::vector<Decision>> decisions(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        decisions[d].assign(steps, Decision::Transmit);
        const FilterParams params = config.filter_for(data.names()[d]);
        FilterState state;
        for (std::size_t t = 0; t < steps; ++t) {
            if (!data.present[d][t]) continue;
            Decision decision = Decision::Transmit;
            if (!force_transmit) {
                const Assessment a = assess(state, params, data.values[d][t]);
                state = a.state;
                decision = a.decision;
                out.assessments += 1;
            }
            decisions[d][t] = decision;
        }
    }

    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t d = 0; d < dims; ++d) {
            if (!data.present[d][t]) continue;
            AttributeReport& attr = out.attributes[d];
            attr.total += 1;
            switch (decisions[d][t]) {
                case Decision::Transmit:
                    attr.transmitted += 1;
                    out.received_by_step[t].push_back({d, data.values[d][t]});
                    break;
                case Decision::DiscardUninteresting:
                    attr.uninteresting += 1;
                    break;
                case Decision::DiscardFaulty:
                    attr.faulty += 1;
                    break;
            }
            if (decisions_csv) {
                *decisions_csv << t << ',' << dim_pairs[d].first << ',' << dim_pairs[d].second
                               << ',' << format_double(data.values[d][t]) << ','
                               << to_string(decisions[d][t]) << '\n';
            }
        }
    }

    for (std::size_t d = 0; d < dims; ++d) {
        out.attributes[d].name = data.names()[d];
        out.total_readings += out.attributes[d].total;
        out.transmitted_points += out.attributes[d].transmitted;

        const auto sensor = static_cast<std::size_t>(dim_pairs[d].first - 1);
        EnergyLedger& ledger = out.per_sensor[sensor];
        ledger.transmitted_bytes +=
            out.attributes[d].transmitted * config.energy.bytes_per_datapoint;
        ledger.instructions_executed +=
            (force_transmit ? 0 : out.attributes[d].total) * config.instructions_per_assessment;
    }
    if (!force_transmit) {
        // One keepalive byte per sensor per acknowledgement interval.
        const std::int64_t acks =
            static_cast<std::int64_t>(steps) / ack_schedule(config.filter);
        for (EnergyLedger& ledger : out.per_sensor) {
            ledger.ack_bytes += acks;
        }
    }
    return out;
}

RunReport run_pipeline(const ExperimentConfig& config, bool force_transmit) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();

    Dataset data = load_input(config);
    RunReport report;

    std::vector<std::uint8_t> labels;
    if (config.injection_enabled) {
        if (!data.gap_free()) {
            throw ConfigError("anomaly injection requires a gap-free input");
        }
        config.injection.validate(data.dimensions());
        InjectionResult injected = inject_anomalies(data.values, config.injection);
        data.values = std::move(injected.series);
        labels = std::move(injected.labels);
    }

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);

    std::ofstream decisions_csv;
    if (config.write_decisions) {
        decisions_csv = open_artifact(out_dir / "decisions.csv");
        decisions_csv << "t,sensor_id,attribute_id,value,decision\n";
    }
    Tier1Output tier1 = run_tier1(data, config, force_transmit,
                                  config.write_decisions ? &decisions_csv : nullptr);
    report.attributes = std::move(tier1.attributes);

    // Gateway reconstruction: dense vectors exist from the first step where
    // every dimension has been received at least once.
    std::vector<TimeStepVector> stream;
    stream.reserve(data.steps());
    ReconstructionState recon(data.dimensions());
    for (std::size_t t = 0; t < data.steps(); ++t) {
        auto vec = reconstruct_step(recon, tier1.received_by_step[t],
                                    static_cast<std::int64_t>(t));
        if (vec) stream.push_back(std::move(*vec));
    }

    std::vector<ScoredPoint> scored;
    try {
        scored = process_stream(stream, config.tier2);
    } catch (const StreamTooShort& e) {
        report.notes.push_back(std::string("detector skipped: ") + e.what());
    }
    report.scored_points = static_cast<std::int64_t>(scored.size());
    report.first_scored_step = scored.empty() ? -1 : scored.front().t;

    {
        auto scores_csv = open_artifact(out_dir / "scores.csv");
        scores_csv << "t,score,is_anomaly\n";
        for (const ScoredPoint& sp : scored) {
            scores_csv << sp.t << ',' << format_double(sp.score) << ','
                       << (sp.is_anomaly ? 1 : 0) << '\n';
        }
    }
    {
        auto alarms_csv = open_artifact(out_dir / "alarms.csv");
        alarms_csv << "t_start,t_end\n";
        for (std::size_t i = 0; i < scored.size();) {
            if (!scored[i].is_anomaly) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < scored.size() && scored[j + 1].is_anomaly &&
                   scored[j + 1].t == scored[j].t + 1) {
                ++j;
            }
            report.alarms.emplace_back(scored[i].t, scored[j].t);
            alarms_csv << scored[i].t << ',' << scored[j].t << '\n';
            i = j + 1;
        }
    }

    if (!labels.empty() && !scored.empty()) {
        std::vector<std::uint8_t> flags(scored.size()), truth(scored.size());
        std::vector<double> scores(scored.size());
        for (std::size_t i = 0; i < scored.size(); ++i) {
            flags[i] = scored[i].is_anomaly ? 1 : 0;
            truth[i] = labels[static_cast<std::size_t>(scored[i].t)];
            scores[i] = scored[i].score;
        }
        DetectionReport det;
        det.counts = confusion(flags, truth);
        det.metrics = precision_recall_f1(det.counts);
        try {
            const RocCurve curve = roc_auc(scores, truth);
            det.auc = curve.auc;
            auto roc_csv = open_artifact(out_dir / "roc.csv");
            roc_csv << "fpr,tpr\n";
            for (const RocPoint& pt : curve.points) {
                roc_csv << format_double(pt.fpr) << ',' << format_double(pt.tpr) << '\n';
            }
        } catch (const SingleClass& e) {
            report.notes.push_back(std::string("roc skipped: ") + e.what());
        }
        report.detection = det;
    }

    // Energy: merge the per-sensor ledgers, then price the totals.
    EnergyLedger total = config.energy;
    for (const EnergyLedger& ledger : tier1.per_sensor) {
        total.merge(ledger);
    }
    report.energy = savings_report(tier1.total_readings, tier1.transmitted_points,
                                   total.instructions_executed, total);
    {
        ordered_json j = energy_json(report.energy);
        j["per_sensor"] = ordered_json::array();
        for (std::size_t s = 0; s < tier1.per_sensor.size(); ++s) {
            const EnergyLedger& ledger = tier1.per_sensor[s];
            ordered_json row;
            row["sensor_id"] = s + 1;
            row["transmitted_bytes"] = ledger.transmitted_bytes;
            row["instructions_executed"] = ledger.instructions_executed;
            row["ack_bytes"] = ledger.ack_bytes;
            j["per_sensor"].push_back(row);
        }
        open_artifact(out_dir / "energy.json") << j.dump(2) << '\n';
    }

    {
        ordered_json j;
        j["input"] = config.input;
        j["seed"] = config.seed;
        j["baseline"] = force_transmit;
        j["attributes"] = ordered_json::array();
        for (const AttributeReport& attr : report.attributes) {
            ordered_json row;
            row["name"] = attr.name;
            row["total"] = attr.total;
            row["transmitted"] = attr.transmitted;
            row["discarded_uninteresting"] = attr.uninteresting;
            row["discarded_faulty"] = attr.faulty;
            row["discard_pct"] = attr.discard_pct();
            j["attributes"].push_back(row);
        }
        j["energy"] = energy_json(report.energy);
        if (report.detection) {
            ordered_json det;
            det["tp"] = report.detection->counts.tp;
            det["fp"] = report.detection->counts.fp;
            det["fn"] = report.detection->counts.fn;
            det["tn"] = report.detection->counts.tn;
            det["precision"] = report.detection->metrics.precision;
            det["recall"] = report.detection->metrics.recall;
            det["f1"] = report.detection->metrics.f1;
            if (report.detection->auc) det["auc"] = *report.detection->auc;
            j["detection"] = det;
        } else {
            j["detection"] = nullptr;
        }
        j["alarms"] = ordered_json::array();
        for (const auto& [start, end] : report.alarms) {
            j["alarms"].push_back(ordered_json::array({start, end}));
        }
        j["scored_points"] = report.scored_points;
        j["first_scored_step"] = report.first_scored_step;
        j["notes"] = report.notes;
        open_artifact(out_dir / "report.json") << j.dump(2) << '\n';
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace

double AttributeReport::discard_pct() const {
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(uninteresting + faulty) / static_cast<double>(total);
}

Dataset load_input(const ExperimentConfig& config) {
    if (config.input == "synthetic") {
        const SyntheticSpec spec =
            config.profile == "drifting"
                ? drifting_vitals_profile(config.steps, derive_seed(config.seed, 0))
                : vitals_profile(config.steps, derive_seed(config.seed, 0));
        std::vector<std::string> names;
        names.reserve(spec.attributes.size());
        for (const SyntheticAttribute& a : spec.attributes) names.push_back(a.name);
        return dataset_from_series(std::move(names), generate(spec));
    }
    return ingest(config.input);
}

RunReport run_experiment(const ExperimentConfig& config) {
    return run_pipeline(config, false);
}

RunReport baseline_run(const ExperimentConfig& config) {
    return run_pipeline(config, true);
}

std::vector<SweepRow> sweep_experiment(const ExperimentConfig& config) {
    config.validate();
    const Dataset data = load_input(config);
    if (!data.gap_free()) {
        throw ConfigError("the epsilon sweep requires a gap-free input");
    }
    const auto rows = epsilon_sweep(data.values, config.filter, config.sweep_grid);

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);
    auto sweep_csv = open_artifact(out_dir / "sweep.csv");
    sweep_csv << "epsilon,discard_pct,nmse\n";
    for (const SweepRow& row : rows) {
        sweep_csv << format_double(row.epsilon) << ',' << format_double(row.discard_pct) << ','
                  << format_double(row.nmse) << '\n';
    }
    return rows;
}

InjectionResult inject_experiment(const ExperimentConfig& config) {
    config.validate();
    Dataset data = load_input(config);
    if (!data.gap_free()) {
        throw ConfigError("anomaly injection requires a gap-free input");
    }
    config.injection.validate(data.dimensions());
    InjectionResult result = inject_anomalies(data.values, config.injection);

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);
    Dataset corrupted = data;
    corrupted.values = result.series;
    write_wide_csv((out_dir / "corrupted.csv").string(), corrupted);
    auto labels_csv = open_artifact(out_dir / "labels.csv");
    labels_csv << "t,label\n";
    for (std::size_t t = 0; t < result.labels.size(); ++t) {
        labels_csv << t << ',' << static_cast<int>(result.labels[t]) << '\n';
    }
    return result;
}

}  // namespace wban
