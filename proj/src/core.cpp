#include "wban/core.hpp"

#include <array>
#include <charconv>
#include <numeric>

namespace wban {

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::Transmit: return "transmit";
        case Decision::DiscardUninteresting: return "discard_uninteresting";
        case Decision::DiscardFaulty: return "discard_faulty";
    }
    return "unknown";
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;  // cannot fail with a 64-byte buffer
    return std::string(buf, end);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ParseError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ParseError("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::string to_csv(const Reading& r) {
    std::string out;
    out += std::to_string(r.t);
    out += ',';
    out += std::to_string(r.sensor_id);
    out += ',';
    out += std::to_string(r.attribute_id);
    out += ',';
    out += format_double(r.value);
    return out;
}

Reading reading_from_csv(std::string_view line) {
    std::array<std::string_view, 4> fields;
    std::size_t n = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (n >= fields.size()) {
                throw ParseError("expected 4 fields, got more: '" + std::string(line) + "'");
            }
            fields[n++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    if (n != 4) {
        throw ParseError("expected 4 fields, got " + std::to_string(n) + ": '" +
                         std::string(line) + "'");
    }
    Reading r;
    r.t = parse_int(fields[0]);
    r.sensor_id = static_cast<int>(parse_int(fields[1]));
    r.attribute_id = static_cast<int>(parse_int(fields[2]));
    r.value = parse_double(fields[3]);
    return r;
}

int SensorTopology::total_dimensions() const {
    return std::accumulate(attributes_per_sensor.begin(), attributes_per_sensor.end(), 0);
}

SensorTopology single_attribute_topology(std::vector<std::string> names) {
    SensorTopology topo;
    topo.attributes_per_sensor.assign(names.size(), 1);
    topo.dimension_names = std::move(names);
    return topo;
}

std::vector<std::pair<int, int>> enumerate_dimensions(const SensorTopology& topo) {
    std::vector<std::pair<int, int>> dims;
    dims.reserve(static_cast<std::size_t>(topo.total_dimensions()));
    for (std::size_t s = 0; s < topo.attributes_per_sensor.size(); ++s) {
        for (int a = 0; a < topo.attributes_per_sensor[s]; ++a) {
            dims.emplace_back(static_cast<int>(s) + 1, a + 1);
        }
    }
    return dims;
}

int dimension_index(const SensorTopology& topo, int sensor_id, int attribute_id) {
    if (sensor_id < 1 || static_cast<std::size_t>(sensor_id) > topo.attributes_per_sensor.size()) {
        throw ConfigError("sensor_id " + std::to_string(sensor_id) + " outside topology");
    }
    if (attribute_id < 1 || attribute_id > topo.attributes_per_sensor[sensor_id - 1]) {
        throw ConfigError("attribute_id " + std::to_string(attribute_id) + " outside sensor " +
                          std::to_string(sensor_id));
    }
    int index = 0;
    for (int s = 0; s < sensor_id - 1; ++s) {
        index += topo.attributes_per_sensor[s];
    }
    return index + attribute_id - 1;
}

}  // namespace wban
