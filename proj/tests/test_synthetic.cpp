#include <doctest.h>

#include <wban/synthetic.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include <wban/core.hpp>

using namespace wban;

TEST_CASE("vitals profile carries six named channels") {
    auto spec = vitals_profile(100, 0);
    REQUIRE(spec.attributes.size() == 6);
    std::vector<std::string> names;
    for (const auto& a : spec.attributes) names.push_back(a.name);
    CHECK(names == std::vector<std::string>{"RESP", "BP-S", "BP-D", "SpO2", "HR", "PULSE"});
    CHECK(spec.steps == 100);
    auto drifting = drifting_vitals_profile(100, 0);
    REQUIRE(drifting.attributes.size() == 6);
    CHECK(drifting.attributes[0].name == "RESP");
}

TEST_CASE("generation is deterministic in the seed") {
    auto spec = vitals_profile(500, 42);
    auto a = generate(spec);
    auto b = generate(spec);
    CHECK(a == b);
    spec.rng_seed = 43;
    auto c = generate(spec);
    CHECK(a != c);
}

TEST_CASE("every attribute draws its own stream") {
    // Removing trailing attributes must not change the earlier series:
    // otherwise reordering a profile silently reshuffles every channel.
    auto full = vitals_profile(300, 7);
    auto lead = full;
    lead.attributes.resize(2);
    auto all = generate(full);
    auto two = generate(lead);
    CHECK(all[0] == two[0]);
    CHECK(all[1] == two[1]);
}

TEST_CASE("generated series have the requested shape") {
    auto spec = vitals_profile(1234, 5);
    auto series = generate(spec);
    REQUIRE(series.size() == 6);
    for (const auto& dim : series) CHECK(dim.size() == 1234);
}

TEST_CASE("quantization snaps values onto the grid") {
    auto spec = vitals_profile(2000, 9);
    auto series = generate(spec);
    for (std::size_t k = 0; k < spec.attributes.size(); ++k) {
        const double q = spec.attributes[k].quant_step;
        REQUIRE(q > 0.0);
        for (double v : series[k]) {
            double multiple = v / q;
            CHECK(std::abs(multiple - std::round(multiple)) < 1e-6);
        }
    }
    // The drifting profile is deliberately unquantized.
    auto drift = generate(drifting_vitals_profile(2000, 9));
    int offgrid = 0;
    for (double v : drift[1]) {
        if (std::abs(v - std::round(v)) > 1e-6) ++offgrid;
    }
    CHECK(offgrid > 1900);
}

TEST_CASE("series hover around their configured means") {
    auto spec = vitals_profile(20000, 3);
    auto series = generate(spec);
    for (std::size_t k = 0; k < spec.attributes.size(); ++k) {
        const auto& a = spec.attributes[k];
        double mean = std::accumulate(series[k].begin(), series[k].end(), 0.0) /
                      static_cast<double>(series[k].size());
        // Sinusoid averages out; AR wander keeps the tolerance loose.
        CHECK(std::abs(mean - a.mean) < a.sine_amp + 1.0);
        for (double v : series[k]) {
            CHECK(std::isfinite(v));
            CHECK(std::abs(v - a.mean) < 40.0);  // physiologically bounded
        }
    }
}

TEST_CASE("consecutive readings barely move: the filter's target regime") {
    auto spec = vitals_profile(5000, 21);
    auto series = generate(spec);
    for (std::size_t k = 0; k < series.size(); ++k) {
        double max_jump = 0.0;
        for (std::size_t t = 1; t < series[k].size(); ++t) {
            max_jump = std::max(max_jump, std::abs(series[k][t] - series[k][t - 1]));
        }
        CHECK(max_jump < 6.0);
    }
}

TEST_CASE("degenerate specs are rejected") {
    SyntheticSpec empty;
    empty.steps = 10;
    CHECK_THROWS_AS(generate(empty), ConfigError);

    auto zero_steps = vitals_profile(0, 1);
    CHECK_THROWS_AS(generate(zero_steps), ConfigError);

    auto bad = vitals_profile(10, 1);
    bad.attributes[0].ar_phi = 1.0;
    CHECK_THROWS_AS(generate(bad), ConfigError);
    bad = vitals_profile(10, 1);
    bad.attributes[0].period_steps = 0.0;
    CHECK_THROWS_AS(generate(bad), ConfigError);
}
