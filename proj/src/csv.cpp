#include "wban/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace wban {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.emplace_back(line, start, i - start);
            start = i + 1;
        }
    }
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line_no, const std::string& why) {
    throw ParseError(origin + " line " + std::to_string(line_no) + ": " + why);
}

double parse_cell(const std::string& origin, std::size_t line_no, std::size_t column,
                  const std::string& text) {
    double v;
    try {
        v = parse_double(text);
    } catch (const ParseError& e) {
        fail(origin, line_no, "column " + std::to_string(column + 1) + ": " + e.what());
    }
    if (!std::isfinite(v)) {
        fail(origin, line_no,
             "column " + std::to_string(column + 1) + ": value must be finite");
    }
    return v;
}

Dataset ingest_wide(std::istream& in, const std::string& origin,
                    const std::vector<std::string>& header) {
    const std::size_t dims = header.size() - 1;
    if (dims == 0) {
        throw EmptyInput(origin + ": wide layout needs at least one attribute column");
    }

    Dataset data;
    data.topo = single_attribute_topology({header.begin() + 1, header.end()});

    // First pass into (t, row) records; the step count is only known at the
    // end because rows may be skipped entirely.
    std::vector<std::pair<std::int64_t, std::vector<std::pair<std::size_t, double>>>> rows;
    std::int64_t max_t = -1, prev_t = -1;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            fail(origin, line_no,
                 "expected " + std::to_string(header.size()) + " fields, got " +
                     std::to_string(fields.size()));
        }
        std::int64_t t;
        try {
            t = parse_int(fields[0]);
        } catch (const ParseError& e) {
            fail(origin, line_no, std::string("column 1: ") + e.what());
        }
        if (t < 0) fail(origin, line_no, "t must be non-negative");
        if (t <= prev_t) fail(origin, line_no, "t must be strictly increasing");
        prev_t = t;
        max_t = std::max(max_t, t);

        std::vector<std::pair<std::size_t, double>> cells;
        for (std::size_t d = 0; d < dims; ++d) {
            const std::string& cell = fields[d + 1];
            if (cell.empty()) continue;  // absent reading
            cells.emplace_back(d, parse_cell(origin, line_no, d + 1, cell));
        }
        rows.emplace_back(t, std::move(cells));
    }
    if (rows.empty()) {
        throw EmptyInput(origin + ": no data rows");
    }

    const auto steps = static_cast<std::size_t>(max_t + 1);
    data.values.assign(dims, std::vector<double>(steps, 0.0));
    data.present.assign(dims, std::vector<std::uint8_t>(steps, 0));
    for (const auto& [t, cells] : rows) {
        for (const auto& [d, v] : cells) {
            data.values[d][static_cast<std::size_t>(t)] = v;
            data.present[d][static_cast<std::size_t>(t)] = 1;
        }
    }
    return data;
}

Dataset ingest_narrow(std::istream& in, const std::string& origin) {
    std::vector<Reading> readings;
    std::int64_t max_t = -1;
    std::map<int, int> attrs_per_sensor;  // sensor_id -> max attribute_id
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        Reading r;
        try {
            r = reading_from_csv(line);
        } catch (const ParseError& e) {
            fail(origin, line_no, e.what());
        }
        if (r.t < 0) fail(origin, line_no, "t must be non-negative");
        if (r.sensor_id < 1 || r.attribute_id < 1) {
            fail(origin, line_no, "sensor_id and attribute_id are 1-based");
        }
        if (!std::isfinite(r.value)) fail(origin, line_no, "value must be finite");
        max_t = std::max(max_t, r.t);
        auto [it, inserted] = attrs_per_sensor.try_emplace(r.sensor_id, r.attribute_id);
        if (!inserted) it->second = std::max(it->second, r.attribute_id);
        readings.push_back(r);
    }
    if (readings.empty()) {
        throw EmptyInput(origin + ": no data rows");
    }

    SensorTopology topo;
    for (const auto& [sensor, max_attr] : attrs_per_sensor) {
        // Sensor ids may be sparse in the file; missing ones get no slot.
        while (static_cast<int>(topo.attributes_per_sensor.size()) < sensor - 1) {
            topo.attributes_per_sensor.push_back(1);
        }
        topo.attributes_per_sensor.push_back(max_attr);
    }
    for (auto [sensor, attr] : enumerate_dimensions(topo)) {
        topo.dimension_names.push_back("s" + std::to_string(sensor) + ".a" +
                                       std::to_string(attr));
    }

    Dataset data;
    data.topo = topo;
    const auto steps = static_cast<std::size_t>(max_t + 1);
    const auto dims = static_cast<std::size_t>(topo.total_dimensions());
    data.values.assign(dims, std::vector<double>(steps, 0.0));
    data.present.assign(dims, std::vector<std::uint8_t>(steps, 0));
    for (const Reading& r : readings) {
        const auto d = static_cast<std::size_t>(dimension_index(topo, r.sensor_id, r.attribute_id));
        data.values[d][static_cast<std::size_t>(r.t)] = r.value;
        data.present[d][static_cast<std::size_t>(r.t)] = 1;
    }
    return data;
}

}  // namespace

bool Dataset::gap_free() const {
    for (const auto& dim : present) {
        if (!std::all_of(dim.begin(), dim.end(), [](std::uint8_t b) { return b != 0; })) {
            return false;
        }
    }
    return true;
}

Dataset dataset_from_series(std::vector<std::string> names,
                            std::vector<std::vector<double>> series) {
    if (names.size() != series.size()) {
        throw LengthMismatch("names and series count differ");
    }
    Dataset data;
    data.topo = single_attribute_topology(std::move(names));
    data.values = std::move(series);
    data.present.reserve(data.values.size());
    for (const auto& dim : data.values) {
        data.present.emplace_back(dim.size(), 1);
    }
    return data;
}

Dataset ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw EmptyInput("cannot open input file: " + path);
    }
    return ingest_stream(in, path);
}

Dataset ingest_stream(std::istream& in, const std::string& origin) {
    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw EmptyInput(origin + ": empty file");
    }
    header_line = strip_cr(header_line);
    const auto header = split_fields(header_line);
    if (header.empty() || header[0] != "t") {
        throw ParseError(origin + " line 1: header must start with 't'");
    }
    if (header.size() == 4 && header[1] == "sensor_id" && header[2] == "attribute_id" &&
        header[3] == "value") {
        return ingest_narrow(in, origin);
    }
    return ingest_wide(in, origin, header);
}

void write_wide_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) {
        throw EmptyInput("cannot open output file: " + path);
    }
    out << 't';
    for (const std::string& name : data.names()) out << ',' << name;
    out << '\n';
    for (std::size_t t = 0; t < data.steps(); ++t) {
        out << t;
        for (std::size_t d = 0; d < data.dimensions(); ++d) {
            out << ',';
            if (data.present[d][t]) out << format_double(data.values[d][t]);
        }
        out << '\n';
    }
}

}  // namespace wban
