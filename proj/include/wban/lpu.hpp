#pragma once

// Gateway-side stream reconstruction. Discarded-as-uninteresting readings
// never arrive, so the gateway fills the gap with the last value it received
// for that dimension (the filter only suppresses readings that barely moved,
// which is exactly when carry-forward is accurate). Also provides the
// per-window min-max normalization the detector consumes.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wban/core.hpp"

namespace wban {

// One transmitted value landing at the gateway in the current step.
struct ReceivedValue {
    std::size_t dimension = 0;
    double value = 0.0;
};

// Last-received value per dimension. A dense time-step vector can only be
// emitted once every dimension has been seen at least once.
struct ReconstructionState {
    std::vector<double> last_value;
    std::vector<std::uint8_t> initialized;

    explicit ReconstructionState(std::size_t dimensions)
        : last_value(dimensions, 0.0), initialized(dimensions, 0) {}

    std::size_t dimensions() const { return last_value.size(); }
    bool all_initialized() const;
};

// Folds one step's arrivals into the state and, when every dimension has a
// value, returns the dense vector for step t (absent dimensions carried
// forward). Returns nullopt during the initial fill-in phase.
std::optional<TimeStepVector> reconstruct_step(ReconstructionState& state,
                                               std::span<const ReceivedValue> received,
                                               std::int64_t t);

// Min-max normalizes each dimension over the window to [0, 1]. A dimension
// that is constant across the whole window maps to 0.0. The window must be
// non-empty and rectangular.
std::vector<std::vector<double>> normalize_window(std::span<const TimeStepVector> window);

}  // namespace wban
