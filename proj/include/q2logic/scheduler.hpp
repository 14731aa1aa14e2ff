#pragma once

#include "q2logic/circuit.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace q2 {

struct SystemConfig {
    int n_qpu = 1;       // QPU chain length = max gates per bitstream
    int n_sysqbits = 1;  // window width k (chunk size 2^k)
    int n_qubits = 1;    // circuit width n
    // Policy knob: allow a controlled gate whose control sits outside the
    // window. The device reads control bits from the full arrival index, so
    // any position executes correctly; default scheduling keeps both operands
    // in-window.
    bool allow_external_control = false;

    int window_width() const { return std::min(n_sysqbits, n_qubits); }
    void validate() const;  // throws std::invalid_argument
};

// Rotation band with degraded write-back bandwidth (memory banks serialize).
inline bool in_rotation_penalty_band(int rotation) {
    int a = rotation < 0 ? -rotation : rotation;
    return a >= 4 && a <= 12;
}

// Relative cost of a write-back rotation; 1.0 means no penalty.
struct PenaltyTable {
    std::map<int, double> rows;
    double fallback = 1.0;

    double at(int rotation) const;

    static PenaltyTable uniform();        // every rotation costs 1.0
    static PenaltyTable default_table();  // 12x cost inside the 4..12 band
};

enum class SlotKind : std::uint8_t { nop = 0, unary = 1, controlled = 2 };

// One QPU slot. Positions are physical bit positions under the plan's window
// mapping: physical(q) = (q - window_start) mod n.
struct PlanSlot {
    SlotKind kind = SlotKind::nop;
    GateMatrix matrix;  // identity for NOP
    int target_pos = 0;
    int control_pos = 0;  // 0 when unused
    std::uint32_t gate_id = 0;
    std::string label;  // not serialized

    bool is_nop() const { return kind == SlotKind::nop; }
};

// One hardware configuration: a full streaming pass through the QPU chain
// followed by a write-back rotation.
struct BitstreamPlan {
    int window_start = 0;
    int rotation_out = 0;
    std::vector<PlanSlot> slots;  // length n_qpu, execution order

    int occupied() const;
    std::vector<std::uint32_t> gate_ids() const;  // non-NOP ids in slot order
};

class ScheduleError : public std::runtime_error {
public:
    ScheduleError(std::uint32_t gate_id, const std::string& message);

    std::uint32_t gate_id() const { return gate_id_; }

private:
    std::uint32_t gate_id_;
};

// Minimal-magnitude representative of (s_next - s_prev) mod n in (-n/2, n/2].
int rotation_between(int s_prev, int s_next, int n);

// Greedy fill of the cyclic window starting at `window_start`: repeatedly the
// lowest-id gate that is ready (counting gates already placed in this
// bitstream as done) and whose operands lie in the window, up to n_qpu gates.
// Returns placement order.
std::vector<std::uint32_t> score_window(const Circuit& circuit, const DepDag& dag,
                                        const std::vector<bool>& done, int window_start,
                                        const SystemConfig& cfg);

// Pack the circuit into bitstreams, choosing each window to maximize
// gate count / rotation penalty (ties: lower penalty, smaller |rotation|,
// smaller window start). The first plan always executes under the canonical
// mapping (window_start 0); a rotation-only all-NOP plan is prepended when
// the first scored window differs. The final plan rotates the mapping back
// to 0. Throws ScheduleError when a gate fits no window.
std::vector<BitstreamPlan> schedule(const Circuit& circuit, const SystemConfig& cfg,
                                    const PenaltyTable& penalty = PenaltyTable::default_table());

struct UtilizationRecord {
    int index = 0;
    int window_start = 0;
    int rotation = 0;
    int occupied = 0;
    double utilization = 0.0;
    double relative_cost = 1.0;  // penalty of the write-back rotation
};

struct UtilizationReport {
    std::vector<UtilizationRecord> rows;
    double mean_utilization = 0.0;
};

UtilizationReport utilization_report(const std::vector<BitstreamPlan>& plans,
                                     const SystemConfig& cfg,
                                     const PenaltyTable& penalty = PenaltyTable::default_table());

}  // namespace q2
