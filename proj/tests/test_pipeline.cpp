#include <doctest.h>

#include <wban/csv.hpp>
#include <wban/energy.hpp>
#include <wban/pipeline.hpp>

#include <json.hpp>

#include "support.hpp"

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace wban;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& tag) {
    ExperimentConfig c;
    c.steps = 600;
    c.seed = 11;
    c.tier2.omega = 256;
    c.tier2.n_tree = 30;
    c.tier2.k_tree = 5;
    c.out_dir = testkit::fresh_dir(tag).string();
    c.resolve();
    return c;
}

std::vector<std::pair<std::int64_t, std::int64_t>> alarm_runs_from_scores(const fs::path& csv) {
    std::istringstream in(testkit::slurp(csv));
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::pair<std::int64_t, bool>> rows;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.rfind(',');
        rows.emplace_back(std::stoll(line.substr(0, c1)), line.substr(c2 + 1) == "1");
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> runs;
    for (std::size_t i = 0; i < rows.size();) {
        if (!rows[i].second) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < rows.size() && rows[j + 1].second && rows[j + 1].first == rows[j].first + 1)
            ++j;
        runs.emplace_back(rows[i].first, rows[j].first);
        i = j + 1;
    }
    return runs;
}

}  // namespace

// --- CSV ingestion -----------------------------------------------------------

TEST_CASE("wide CSV round-trips through write and ingest") {
    auto dir = testkit::fresh_dir("csv-roundtrip");
    auto data = dataset_from_series({"HR", "SpO2"}, {{75.0, 76.5, 75.25}, {98.0, 97.5, 98.0}});
    auto path = (dir / "series.csv").string();
    write_wide_csv(path, data);
    auto back = ingest(path);
    CHECK(back.names() == data.names());
    CHECK(back.values == data.values);
    CHECK(back.present == data.present);
    CHECK(back.gap_free());
    CHECK(back.steps() == 3);
    CHECK(back.dimensions() == 2);
}

TEST_CASE("wide CSV treats empty cells and skipped rows as absent readings") {
    std::istringstream in(
        "t,HR,RESP\n"
        "0,75,16\n"
        "1,,17\n"
        "3,78,\n");
    auto data = ingest_stream(in, "gaps.csv");
    CHECK(data.steps() == 4);  // skipped t=2 still occupies a step
    CHECK_FALSE(data.gap_free());
    CHECK(data.present[0] == std::vector<std::uint8_t>{1, 0, 0, 1});
    CHECK(data.present[1] == std::vector<std::uint8_t>{1, 1, 0, 0});
    CHECK(data.values[0][0] == 75.0);
    CHECK(data.values[1][1] == 17.0);
    CHECK(data.values[0][3] == 78.0);

    // And the gaps survive a write/ingest round trip.
    auto dir = testkit::fresh_dir("csv-gaps");
    auto path = (dir / "gaps.csv").string();
    write_wide_csv(path, data);
    auto back = ingest(path);
    CHECK(back.present == data.present);
    CHECK(back.values[0][0] == data.values[0][0]);
}

TEST_CASE("narrow CSV reconstructs the sensor topology") {
    std::istringstream in(
        "t,sensor_id,attribute_id,value\n"
        "0,1,1,120\n"
        "0,1,2,80\n"
        "0,2,1,75\n"
        "1,1,1,121\n"
        "1,2,1,74\n");
    auto data = ingest_stream(in, "narrow.csv");
    CHECK(data.topo.attributes_per_sensor == std::vector<int>{2, 1});
    CHECK(data.names() == std::vector<std::string>{"s1.a1", "s1.a2", "s2.a1"});
    CHECK(data.steps() == 2);
    CHECK(data.values[0][0] == 120.0);
    CHECK(data.values[1][0] == 80.0);
    CHECK(data.values[2][1] == 74.0);
    CHECK_FALSE(data.gap_free());  // s1.a2 missing at t=1
}

TEST_CASE("narrow CSV pads sparse sensor ids") {
    std::istringstream in(
        "t,sensor_id,attribute_id,value\n"
        "0,1,1,1\n"
        "0,3,1,3\n");
    auto data = ingest_stream(in, "sparse.csv");
    CHECK(data.topo.attributes_per_sensor == std::vector<int>{1, 1, 1});
    CHECK(data.names()[2] == "s3.a1");
    CHECK(data.present[1] == std::vector<std::uint8_t>{0});
}

TEST_CASE("parse errors name the file and the 1-based physical line") {
    // Eleven good rows, then a malformed 12th data row: the header is line 1,
    // so the bad row is line 13.
    std::string text = "t,HR\n";
    for (int t = 0; t < 11; ++t) text += std::to_string(t) + ",75\n";
    text += "11,seventy\n";
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(ingest_stream(in, "vitals.csv"),
                         doctest::Contains("vitals.csv line 13"), ParseError);
}

TEST_CASE("wide ingestion rejects structural violations") {
    auto reject = [](const std::string& text, const std::string& what) {
        std::istringstream in(text);
        CHECK_THROWS_WITH_AS(ingest_stream(in, "x.csv"), doctest::Contains(what.c_str()), ParseError);
    };
    reject("t,HR\n1,75\n1,76\n", "strictly increasing");
    reject("t,HR\n2,75\n1,76\n", "strictly increasing");
    reject("t,HR\n-1,75\n", "non-negative");
    reject("t,HR\n0,75,99\n", "expected 2 fields");
    reject("t,HR\n0,inf\n", "finite");
    reject("time,HR\n0,75\n", "header");
}

TEST_CASE("narrow ingestion rejects bad readings") {
    auto reject = [](const std::string& text, const std::string& what) {
        std::istringstream in(text);
        CHECK_THROWS_WITH_AS(ingest_stream(in, "x.csv"), doctest::Contains(what.c_str()), ParseError);
    };
    reject("t,sensor_id,attribute_id,value\n0,0,1,5\n", "1-based");
    reject("t,sensor_id,attribute_id,value\n-1,1,1,5\n", "non-negative");
    reject("t,sensor_id,attribute_id,value\n0,1,1,nan\n", "finite");
    reject("t,sensor_id,attribute_id,value\n0,1,1\n", "line 2");
}

TEST_CASE("empty inputs are diagnosed as empty, not as parse failures") {
    std::istringstream no_rows("t,HR\n");
    CHECK_THROWS_AS(ingest_stream(no_rows, "x.csv"), EmptyInput);
    std::istringstream nothing("");
    CHECK_THROWS_AS(ingest_stream(nothing, "x.csv"), EmptyInput);
    CHECK_THROWS_AS(ingest("/nonexistent/stream.csv"), EmptyInput);
}

// --- end-to-end pipeline -------------------------------------------------------

TEST_CASE("a small synthetic run produces a consistent report and all artifacts") {
    auto config = small_config("pipeline-small");
    auto report = run_experiment(config);

    REQUIRE(report.attributes.size() == 6);
    std::int64_t transmitted = 0, total = 0;
    for (const auto& attr : report.attributes) {
        // Every reading is decided exactly once.
        CHECK(attr.total == attr.transmitted + attr.uninteresting + attr.faulty);
        CHECK(attr.total == 600);
        transmitted += attr.transmitted;
        total += attr.total;
    }
    CHECK(total == 3600);
    CHECK(report.scored_points == 600);  // warm-up transmits make t=0 dense
    CHECK(report.first_scored_step == 0);
    CHECK(report.notes.empty());
    CHECK(report.wall_seconds > 0.0);

    // Energy must be exactly the price of what tier 1 reported.
    EnergyLedger pricing;
    CHECK(report.energy.baseline_J ==
          doctest::Approx(transmission_energy(total, pricing)).epsilon(1e-12));
    CHECK(report.energy.transmission_J ==
          doctest::Approx(transmission_energy(transmitted, pricing)).epsilon(1e-12));
    CHECK(report.energy.computation_J ==
          doctest::Approx(computation_energy(total * 74, pricing)).epsilon(1e-12));
    CHECK(report.energy.ack_J ==
          doctest::Approx(ack_energy(6 * (600 / 60), pricing)).epsilon(1e-12));
    CHECK(report.energy.total_J ==
          doctest::Approx(report.energy.transmission_J + report.energy.computation_J +
                          report.energy.ack_J)
              .epsilon(1e-12));

    for (const char* name :
         {"report.json", "energy.json", "scores.csv", "alarms.csv", "decisions.csv"}) {
        CHECK(fs::exists(fs::path(config.out_dir) / name));
    }

    auto j = nlohmann::json::parse(testkit::slurp(fs::path(config.out_dir) / "report.json"));
    CHECK(j["input"] == "synthetic");
    CHECK(j["seed"] == 11);
    CHECK(j["baseline"] == false);
    REQUIRE(j["attributes"].size() == 6);
    CHECK(j["attributes"][0]["name"] == "RESP");
    CHECK(j["attributes"][0]["total"] == 600);
    CHECK(j["detection"].is_null());  // no labels without injection
    CHECK(j["scored_points"] == 600);
    CHECK(j.contains("energy"));
    CHECK_FALSE(j.contains("wall_seconds"));  // timing never lands in artifacts

    auto e = nlohmann::json::parse(testkit::slurp(fs::path(config.out_dir) / "energy.json"));
    REQUIRE(e["per_sensor"].size() == 6);
    std::int64_t tx_bytes = 0;
    for (const auto& row : e["per_sensor"]) {
        tx_bytes += row["transmitted_bytes"].get<std::int64_t>();
        CHECK(row["ack_bytes"] == 600 / 60);
        CHECK(row["instructions_executed"] == 600 * 74);
    }
    CHECK(tx_bytes == transmitted * 4);

    // The alarm list is exactly the runs of consecutive flagged steps.
    auto runs = alarm_runs_from_scores(fs::path(config.out_dir) / "scores.csv");
    CHECK(report.alarms == runs);
    std::istringstream alarms(testkit::slurp(fs::path(config.out_dir) / "alarms.csv"));
    std::string line;
    std::getline(alarms, line);
    CHECK(line == "t_start,t_end");
    std::size_t alarm_rows = 0;
    while (std::getline(alarms, line)) {
        if (!line.empty()) ++alarm_rows;
    }
    CHECK(alarm_rows == runs.size());
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    auto c1 = small_config("determinism-a");
    auto c2 = small_config("determinism-b");
    c2.seed = c1.seed;
    run_experiment(c1);
    run_experiment(c2);
    for (const char* name :
         {"report.json", "energy.json", "scores.csv", "alarms.csv", "decisions.csv"}) {
        CHECK(testkit::slurp(fs::path(c1.out_dir) / name) ==
              testkit::slurp(fs::path(c2.out_dir) / name));
    }

    auto c3 = small_config("determinism-c");
    c3.seed = c1.seed + 1;
    c3.resolve();
    run_experiment(c3);
    CHECK(testkit::slurp(fs::path(c1.out_dir) / "scores.csv") !=
          testkit::slurp(fs::path(c3.out_dir) / "scores.csv"));
}

TEST_CASE("the baseline run transmits everything and saves nothing") {
    auto config = small_config("pipeline-baseline");
    auto report = baseline_run(config);
    for (const auto& attr : report.attributes) {
        CHECK(attr.transmitted == attr.total);
        CHECK(attr.uninteresting == 0);
        CHECK(attr.faulty == 0);
    }
    CHECK(report.energy.saving_fraction == 0.0);
    CHECK(report.energy.transmission_J == report.energy.baseline_J);
    CHECK(report.energy.computation_J == 0.0);
    CHECK(report.energy.ack_J == 0.0);
    CHECK_FALSE(report.energy.negative_saving);

    auto j = nlohmann::json::parse(testkit::slurp(fs::path(config.out_dir) / "report.json"));
    CHECK(j["baseline"] == true);
}

TEST_CASE("a zero threshold transmits every reading yet still pays for the filter") {
    auto config = small_config("pipeline-zero-eps");
    config.filter.epsilon = 0.0;
    config.filter.low_z = -50.0;
    config.filter.high_z = 50.0;
    auto report = run_experiment(config);
    for (const auto& attr : report.attributes) {
        CHECK(attr.transmitted == attr.total);
        CHECK(attr.uninteresting == 0);
        CHECK(attr.faulty == 0);
    }
    // Same radio bill as the baseline plus instructions and keepalives.
    CHECK(report.energy.negative_saving);
    CHECK(report.energy.saving_fraction < 0.0);
}

TEST_CASE("per-attribute overrides steer individual filters") {
    auto config = small_config("pipeline-override");
    config.filter.low_z = -50.0;
    config.filter.high_z = 50.0;
    config.attribute_overrides["RESP"].epsilon = 0.0;
    auto report = run_experiment(config);
    REQUIRE(report.attributes[0].name == "RESP");
    CHECK(report.attributes[0].transmitted == report.attributes[0].total);
    std::int64_t others_uninteresting = 0;
    for (std::size_t i = 1; i < report.attributes.size(); ++i) {
        others_uninteresting += report.attributes[i].uninteresting;
    }
    CHECK(others_uninteresting > 0);  // the global epsilon still applies elsewhere
}

TEST_CASE("decisions.csv can be switched off") {
    auto config = small_config("pipeline-nodecisions");
    config.write_decisions = false;
    run_experiment(config);
    CHECK_FALSE(fs::exists(fs::path(config.out_dir) / "decisions.csv"));
    CHECK(fs::exists(fs::path(config.out_dir) / "report.json"));
}

TEST_CASE("decisions.csv lists one decided row per reading") {
    auto config = small_config("pipeline-decisions");
    config.steps = 120;
    config.tier2.omega = 64;
    auto report = run_experiment(config);
    auto text = testkit::slurp(fs::path(config.out_dir) / "decisions.csv");
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,sensor_id,attribute_id,value,decision");
    std::int64_t rows = 0, transmits = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.find(",transmit") != std::string::npos) ++transmits;
    }
    std::int64_t expected_tx = 0;
    for (const auto& attr : report.attributes) expected_tx += attr.transmitted;
    CHECK(rows == 120 * 6);
    CHECK(transmits == expected_tx);
}

TEST_CASE("injection produces labels, detection metrics and a ROC artifact") {
    auto config = small_config("pipeline-inject");
    config.steps = 1400;
    config.tier2.omega = 512;
    config.tier2.n_tree = 40;
    config.tier2.k_tree = 8;
    config.filter.low_z = -12.0;  // spikes must reach the gateway to be scored
    config.filter.high_z = 12.0;
    config.injection_enabled = true;
    config.injection.rate = 0.05;
    auto report = run_experiment(config);

    REQUIRE(report.detection.has_value());
    const auto& det = *report.detection;
    CHECK(det.counts.tp + det.counts.fp + det.counts.fn + det.counts.tn == 1400);
    CHECK(det.counts.tp + det.counts.fn == 70);  // floor(0.05 x 1400) corrupted steps
    REQUIRE(det.auc.has_value());
    CHECK(*det.auc > 0.5);  // far better than chance on 6-sigma spikes
    CHECK(fs::exists(fs::path(config.out_dir) / "roc.csv"));

    auto j = nlohmann::json::parse(testkit::slurp(fs::path(config.out_dir) / "report.json"));
    REQUIRE_FALSE(j["detection"].is_null());
    CHECK(j["detection"]["tp"].get<std::int64_t>() == det.counts.tp);
    CHECK(j["detection"]["auc"].get<double>() == doctest::Approx(*det.auc));
}

TEST_CASE("injection refuses inputs with gaps") {
    auto dir = testkit::fresh_dir("pipeline-inject-gap");
    testkit::spit(dir / "gappy.csv", "t,HR,RESP\n0,75,16\n1,,17\n2,76,18\n");
    ExperimentConfig config;
    config.input = (dir / "gappy.csv").string();
    config.out_dir = (dir / "out").string();
    config.injection_enabled = true;
    config.injection.rate = 0.5;
    config.injection.dims_per_event = 1;
    config.resolve();
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
    CHECK_THROWS_AS(inject_experiment(config), ConfigError);
}

TEST_CASE("a stream shorter than one window skips the detector with a note") {
    auto config = small_config("pipeline-short");
    config.steps = 100;
    config.tier2.omega = 1024;
    auto report = run_experiment(config);
    CHECK(report.scored_points == 0);
    CHECK(report.first_scored_step == -1);
    REQUIRE_FALSE(report.notes.empty());
    CHECK(report.notes.front().find("detector skipped") != std::string::npos);
    auto scores = testkit::slurp(fs::path(config.out_dir) / "scores.csv");
    CHECK(scores == "t,score,is_anomaly\n");
    auto j = nlohmann::json::parse(testkit::slurp(fs::path(config.out_dir) / "report.json"));
    CHECK(j["notes"].size() == 1);
}

TEST_CASE("file input flows through the same pipeline") {
    auto dir = testkit::fresh_dir("pipeline-file");
    auto series = dataset_from_series(
        {"A", "B"}, {std::vector<double>(700, 0.0), std::vector<double>(700, 0.0)});
    Rng rng(5);
    for (std::size_t t = 0; t < 700; ++t) {
        series.values[0][t] = 50.0 + rng.normal(0.0, 1.0);
        series.values[1][t] = 90.0 + rng.normal(0.0, 2.0);
    }
    write_wide_csv((dir / "input.csv").string(), series);

    ExperimentConfig config;
    config.input = (dir / "input.csv").string();
    config.out_dir = (dir / "out").string();
    config.tier2.omega = 256;
    config.tier2.n_tree = 20;
    config.tier2.k_tree = 5;
    config.resolve();
    auto report = run_experiment(config);
    REQUIRE(report.attributes.size() == 2);
    CHECK(report.attributes[0].name == "A");
    CHECK(report.attributes[0].total == 700);
    CHECK(report.scored_points == 700);
}

TEST_CASE("sweep_experiment writes one row per grid point") {
    auto config = small_config("pipeline-sweep");
    config.profile = "drifting";
    config.steps = 1500;
    config.sweep_grid = {0.1, 0.3, 0.6};
    auto rows = sweep_experiment(config);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].epsilon == 0.1);
    CHECK(rows[2].epsilon == 0.6);
    auto text = testkit::slurp(fs::path(config.out_dir) / "sweep.csv");
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "epsilon,discard_pct,nmse");
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++n;
    }
    CHECK(n == 3);
}

TEST_CASE("inject_experiment writes the corrupted copy and its labels") {
    auto config = small_config("pipeline-injectexp");
    config.steps = 400;
    config.injection_enabled = true;
    config.injection.rate = 0.1;
    auto result = inject_experiment(config);
    CHECK(std::count(result.labels.begin(), result.labels.end(), 1) == 40);

    auto corrupted = ingest((fs::path(config.out_dir) / "corrupted.csv").string());
    CHECK(corrupted.dimensions() == 6);
    CHECK(corrupted.steps() == 400);
    CHECK(corrupted.gap_free());

    auto labels_text = testkit::slurp(fs::path(config.out_dir) / "labels.csv");
    std::istringstream in(labels_text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,label");
    std::size_t ones = 0, rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.substr(line.find(',') + 1) == "1") ++ones;
    }
    CHECK(rows == 400);
    CHECK(ones == 40);
}
