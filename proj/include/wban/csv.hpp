#pragma once

// Dataset container and CSV ingestion. Two layouts are accepted:
//   wide:   header `t,<name>,<name>,...`, one row per step, empty cells and
//           skipped rows mean the reading never happened;
//   narrow: header `t,sensor_id,attribute_id,value`, one row per reading
//           (the sensor wire form).
// Diagnostics carry 1-based line numbers counting the header as line 1.

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "wban/core.hpp"

namespace wban {

struct Dataset {
    SensorTopology topo;  // narrow files keep their sensor grouping;
                          // wide files get one single-attribute sensor per column
    std::vector<std::vector<double>> values;         // [dimension][step]
    std::vector<std::vector<std::uint8_t>> present;  // 0 marks an absent reading

    const std::vector<std::string>& names() const { return topo.dimension_names; }
    std::size_t dimensions() const { return topo.dimension_names.size(); }
    std::size_t steps() const { return values.empty() ? 0 : values.front().size(); }
    bool gap_free() const;
};

// Wraps fully-present per-dimension series into a Dataset.
Dataset dataset_from_series(std::vector<std::string> names,
                            std::vector<std::vector<double>> series);

// Reads either layout, dispatching on the header. Throws ParseError with the
// offending line, EmptyInput when no data rows follow the header.
Dataset ingest(const std::string& path);
Dataset ingest_stream(std::istream& in, const std::string& origin);

// Writes the wide layout. Absent cells become empty fields.
void write_wide_csv(const std::string& path, const Dataset& data);

}  // namespace wban
