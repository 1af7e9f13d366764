#pragma once

// Shared vocabulary for the two-tier telemetry pipeline: sensor readings,
// filter decisions, gateway time-step vectors, and the error taxonomy used
// across modules.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wban {

// --- errors -----------------------------------------------------------------

// Base for all recoverable pipeline errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data (CSV rows, numeric fields). Message names the line.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid but semantically unusable input (no rows, no columns).
struct EmptyInput : Error {
    using Error::Error;
};

// Invalid or inconsistent experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Running variance below the usable floor; a z-score would be meaningless.
struct VarianceDegenerate : Error {
    using Error::Error;
};

// A sample too small (or too uniform) to build a detector from.
struct DegenerateSample : Error {
    using Error::Error;
};

// Stream shorter than one detector window; no score can be produced.
struct StreamTooShort : Error {
    using Error::Error;
};

// Paired sequences whose lengths must match but do not.
struct LengthMismatch : Error {
    using Error::Error;
};

// A labelled set containing only one class; ranking metrics are undefined.
struct SingleClass : Error {
    using Error::Error;
};

// --- sensor-side types --------------------------------------------------------

// Decision taken by the sensor-side filter for a single reading.
enum class Decision : std::uint8_t {
    Transmit,               // forwarded to the gateway
    DiscardUninteresting,   // healthy but redundant; gateway reconstructs it
    DiscardFaulty,          // outside plausible physiology; dropped at source
};

std::string_view to_string(Decision d);

// One sampled attribute value as it travels from sensor to gateway.
// Sensor and attribute ids are 1-based; the flattened dimension index used
// by the gateway is 0-based.
struct Reading {
    std::int64_t t = 0;    // sample index (uniform sampling assumed)
    int sensor_id = 1;
    int attribute_id = 1;  // index within the sensor
    double value = 0.0;
};

// Wire form: "t,sensor_id,attribute_id,value" with a round-trippable value.
std::string to_csv(const Reading& r);
Reading reading_from_csv(std::string_view line);  // throws ParseError

// --- gateway-side types -------------------------------------------------------

// How a slot in a reconstructed time-step vector was filled.
enum class Source : std::uint8_t {
    Received,        // a transmitted reading arrived this step
    CarriedForward,  // last received value, repeated
};

// Dense per-step vector over all attribute dimensions, as seen by the gateway
// after reconstruction.
struct TimeStepVector {
    std::int64_t t = 0;
    std::vector<double> values;
    std::vector<Source> source;
};

// Static description of the sensor network: how many attributes each sensor
// carries, and display names for the flattened dimensions.
struct SensorTopology {
    std::vector<int> attributes_per_sensor;
    std::vector<std::string> dimension_names;  // size == total_dimensions()

    int total_dimensions() const;
};

// Builds the common one-attribute-per-sensor topology from column names.
SensorTopology single_attribute_topology(std::vector<std::string> names);

// Flattens 1-based (sensor_id, attribute_id) pairs into one global 0-based
// dimension order: sensors ascending, attributes ascending within each.
std::vector<std::pair<int, int>> enumerate_dimensions(const SensorTopology& topo);

// Inverse of enumerate_dimensions for one pair; throws ConfigError if the
// pair is outside the topology.
int dimension_index(const SensorTopology& topo, int sensor_id, int attribute_id);

// --- numeric formatting ---------------------------------------------------------

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// Strict full-string double parse; throws ParseError on anything else.
double parse_double(std::string_view text);

// Strict full-string integer parse; throws ParseError on anything else.
std::int64_t parse_int(std::string_view text);

}  // namespace wban
