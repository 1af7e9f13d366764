#include "wban/energy.hpp"

#include <array>
#include <string>

namespace wban {

namespace {

constexpr std::array<OperationCost, 8> kMica2Table{{
    {"Initialize radio", 350e-6, 6.0},
    {"Turn on radio", 1.5e-3, 1.0},
    {"Switch to RX/TX", 250e-6, 15.0},
    {"Time to sample radio", 350e-6, 15.0},
    {"Evaluate radio sample", 100e-6, 6.0},
    {"Receive 1 byte", 416e-6, 15.0},
    {"Transmit 1 byte", 416e-6, 20.0},
    {"Sample sensors", 1.1, 20.0},
}};

}  // namespace

std::span<const OperationCost> mica2_operation_table() {
    return kMica2Table;
}

const OperationCost& find_operation(std::span<const OperationCost> table, std::string_view name) {
    for (const OperationCost& op : table) {
        if (op.name == name) return op;
    }
    throw ConfigError("no such operation in cost table: '" + std::string(name) + "'");
}

double op_energy(const OperationCost& op, double voltage_V) {
    return op.current_mA * 1e-3 * op.time_s * voltage_V;
}

void EnergyLedger::validate() const {
    if (transmitted_bytes < 0 || instructions_executed < 0 || ack_bytes < 0) {
        throw ConfigError("energy ledger counts must be non-negative");
    }
    if (!(voltage_V > 0.0)) {
        throw ConfigError("voltage_V must be positive");
    }
    if (bytes_per_datapoint <= 0) {
        throw ConfigError("bytes_per_datapoint must be positive");
    }
    if (!(instruction_energy_J > 0.0)) {
        throw ConfigError("instruction_energy_J must be positive");
    }
}

EnergyLedger& EnergyLedger::merge(const EnergyLedger& other) {
    if (voltage_V != other.voltage_V || bytes_per_datapoint != other.bytes_per_datapoint ||
        instruction_energy_J != other.instruction_energy_J) {
        throw ConfigError("cannot merge ledgers with different pricing constants");
    }
    transmitted_bytes += other.transmitted_bytes;
    instructions_executed += other.instructions_executed;
    ack_bytes += other.ack_bytes;
    return *this;
}

double transmission_energy(std::int64_t n_points, const EnergyLedger& defaults,
                           std::span<const OperationCost> table) {
    const double per_byte = op_energy(find_operation(table, "Transmit 1 byte"), defaults.voltage_V);
    return static_cast<double>(n_points) * static_cast<double>(defaults.bytes_per_datapoint) *
           per_byte;
}

double computation_energy(std::int64_t instructions, const EnergyLedger& defaults) {
    return static_cast<double>(instructions) * defaults.instruction_energy_J;
}

double ack_energy(std::int64_t ack_bytes, const EnergyLedger& defaults,
                  std::span<const OperationCost> table) {
    const double per_byte = op_energy(find_operation(table, "Transmit 1 byte"), defaults.voltage_V);
    return static_cast<double>(ack_bytes) * per_byte;
}

SavingsReport savings_report(std::int64_t baseline_points, std::int64_t transmitted_points,
                             std::int64_t instructions, const EnergyLedger& ledger,
                             std::span<const OperationCost> table) {
    if (transmitted_points > baseline_points) {
        throw ConfigError("transmitted_points cannot exceed baseline_points");
    }
    SavingsReport r;
    r.baseline_J = transmission_energy(baseline_points, ledger, table);
    r.transmission_J = transmission_energy(transmitted_points, ledger, table);
    r.computation_J = computation_energy(instructions, ledger);
    r.ack_J = ack_energy(ledger.ack_bytes, ledger, table);
    r.total_J = r.transmission_J + r.computation_J + r.ack_J;
    r.saving_fraction = r.baseline_J > 0.0 ? 1.0 - r.total_J / r.baseline_J : 0.0;
    r.negative_saving = r.total_J > r.baseline_J;
    return r;
}

}  // namespace wban
