#pragma once

// Joule accounting for the sensor tier, priced from the published Mica2
// per-operation current/time table. The headline comparison is transmit-side
// only: a sensor that filters pays for the filter's instructions plus the
// acknowledgement bytes it must receive, and saves the transmissions it
// suppressed.

#include <cstdint>
#include <span>
#include <string_view>

#include "wban/core.hpp"

namespace wban {

struct OperationCost {
    std::string_view name;
    double time_s = 0.0;
    double current_mA = 0.0;
};

// The Mica2 per-operation cost table, stored as data so alternative radio
// profiles can be swapped in without touching any formula.
std::span<const OperationCost> mica2_operation_table();

// Looks up a row by exact name; throws ConfigError when absent.
const OperationCost& find_operation(std::span<const OperationCost> table, std::string_view name);

// Energy of one operation: current x time x voltage.
double op_energy(const OperationCost& op, double voltage_V);

// Per-sensor accumulator of billable counts plus the pricing constants they
// are billed under.
struct EnergyLedger {
    std::int64_t transmitted_bytes = 0;
    std::int64_t instructions_executed = 0;
    std::int64_t ack_bytes = 0;

    double voltage_V = 3.0;
    std::int64_t bytes_per_datapoint = 4;
    double instruction_energy_J = 2.15e-9;

    void validate() const;  // throws ConfigError

    // Component-wise sum of counts; pricing constants must match exactly
    // (ConfigError otherwise), since summed counts under mixed prices would
    // be meaningless.
    EnergyLedger& merge(const EnergyLedger& other);
};

// Radio cost of sending n_points data points (bytes_per_datapoint bytes
// each) at the table's transmit-byte rate.
double transmission_energy(std::int64_t n_points, const EnergyLedger& defaults,
                           std::span<const OperationCost> table = mica2_operation_table());

// CPU cost of the filter: instructions times the per-instruction energy.
double computation_energy(std::int64_t instructions, const EnergyLedger& defaults);

// Radio cost of the keepalive acknowledgement bytes a sensor transmits
// while it is discarding readings, at the table's transmit-byte rate.
double ack_energy(std::int64_t ack_bytes, const EnergyLedger& defaults,
                  std::span<const OperationCost> table = mica2_operation_table());

struct SavingsReport {
    double baseline_J = 0.0;      // transmit everything, compute nothing
    double transmission_J = 0.0;  // filtered transmissions
    double computation_J = 0.0;   // filter instructions
    double ack_J = 0.0;           // acknowledgements received
    double total_J = 0.0;         // filtered grand total
    double saving_fraction = 0.0;
    bool negative_saving = false;  // filtering cost more than it saved
};

// Compares filtered operation against the transmit-everything baseline.
// ACK bytes are taken from the ledger; transmitted/instruction counts come
// from the explicit arguments. Throws ConfigError when
// transmitted_points > baseline_points.
SavingsReport savings_report(std::int64_t baseline_points, std::int64_t transmitted_points,
                             std::int64_t instructions, const EnergyLedger& ledger,
                             std::span<const OperationCost> table = mica2_operation_table());

}  // namespace wban
