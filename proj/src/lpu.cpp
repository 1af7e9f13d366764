#include "wban/lpu.hpp"

#include <algorithm>
#include <string>

namespace wban {

bool ReconstructionState::all_initialized() const {
    return std::all_of(initialized.begin(), initialized.end(),
                       [](std::uint8_t b) { return b != 0; });
}

std::optional<TimeStepVector> reconstruct_step(ReconstructionState& state,
                                               std::span<const ReceivedValue> received,
                                               std::int64_t t) {
    const std::size_t dims = state.dimensions();
    std::vector<Source> source(dims, Source::CarriedForward);
    for (const ReceivedValue& rv : received) {
        if (rv.dimension >= dims) {
            throw LengthMismatch("received dimension " + std::to_string(rv.dimension) +
                                 " outside topology of " + std::to_string(dims));
        }
        state.last_value[rv.dimension] = rv.value;
        state.initialized[rv.dimension] = 1;
        source[rv.dimension] = Source::Received;
    }
    if (!state.all_initialized()) {
        return std::nullopt;
    }
    TimeStepVector out;
    out.t = t;
    out.values = state.last_value;
    out.source = std::move(source);
    return out;
}

std::vector<std::vector<double>> normalize_window(std::span<const TimeStepVector> window) {
    if (window.empty()) {
        throw EmptyInput("cannot normalize an empty window");
    }
    const std::size_t dims = window.front().values.size();
    for (const TimeStepVector& v : window) {
        if (v.values.size() != dims) {
            throw LengthMismatch("ragged window: expected " + std::to_string(dims) +
                                 " dimensions, got " + std::to_string(v.values.size()));
        }
    }

    std::vector<double> lo(dims, 0.0), hi(dims, 0.0);
    for (std::size_t d = 0; d < dims; ++d) {
        lo[d] = hi[d] = window.front().values[d];
    }
    for (const TimeStepVector& v : window) {
        for (std::size_t d = 0; d < dims; ++d) {
            lo[d] = std::min(lo[d], v.values[d]);
            hi[d] = std::max(hi[d], v.values[d]);
        }
    }

    std::vector<std::vector<double>> out(window.size(), std::vector<double>(dims, 0.0));
    for (std::size_t i = 0; i < window.size(); ++i) {
        for (std::size_t d = 0; d < dims; ++d) {
            const double span = hi[d] - lo[d];
            out[i][d] = span > 0.0 ? (window[i].values[d] - lo[d]) / span : 0.0;
        }
    }
    return out;
}

}  // namespace wban
