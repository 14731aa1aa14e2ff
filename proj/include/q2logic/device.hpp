#pragma once

#include "q2logic/scheduler.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace q2 {

using cfloat = std::complex<float>;

// Device-side state: 2^n single-precision amplitudes plus the current
// logical-qubit -> physical-bit mapping (logical q sits at physical bit
// (q - window_start) mod n).
struct StateVector {
    int n_qubits = 0;
    int window_start = 0;
    std::vector<cfloat> amplitudes;

    double norm_squared() const;
};

inline constexpr int kDefaultQubitCap = 30;  // 2^30 amplitudes = 8 GiB

// |0...0> in canonical layout. Throws std::invalid_argument when n is out of
// [1, max_qubits].
StateVector init_state(int n_qubits, int max_qubits = kDefaultQubitCap);

// Cyclic right-rotation of an n-bit address: destination bit j takes source
// bit (j + rotation) mod n. The logical qubit at physical position p moves to
// (p - rotation) mod n, so the window start advances by `rotation`.
std::uint64_t writer_rotate_index(std::uint64_t addr, int rotation, int n_bits);

// One QPU stage over one chunk of 2^chunk_bits amplitudes, arrival order
// preserved: labels (a, a | 1<<target) are updated pairwise by the slot
// matrix. For controlled slots, bit `control_pos` of the global arrival index
// (chunk_index * 2^chunk_bits + label) drives a mux between the computed and
// the incoming value; the control may sit at any position < n_qubits.
// Throws std::invalid_argument when target_pos >= chunk_bits.
void qpu_apply(std::span<const cfloat> in, std::span<cfloat> out, const PlanSlot& slot,
               std::uint64_t chunk_index, int chunk_bits, int n_qubits);

// Full QPU chain over one chunk, then rotated scatter into `state_out`.
// Distinct chunk indices touch disjoint output addresses.
void process_chunk(std::span<const cfloat> state_in, std::span<cfloat> state_out,
                   const BitstreamPlan& plan, std::uint64_t chunk_index, int chunk_bits,
                   int n_qubits);

struct RunOptions {
    int threads = 1;  // worker cap for chunk-parallel execution
};

// One streaming pass: every chunk through the QPU chain in arrival order,
// double-buffered write-back with the plan's rotation. Mapping advances by
// rotation_out.
void run_bitstream(StateVector& state, const BitstreamPlan& plan, const SystemConfig& cfg,
                   const RunOptions& options = {});

// Bitstreams execute strictly in order. For scheduler output the final
// rotation restores the canonical mapping.
void run_program(StateVector& state, const std::vector<BitstreamPlan>& plans,
                 const SystemConfig& cfg, const RunOptions& options = {});

// Permute amplitudes so window_start becomes 0.
void canonicalize(StateVector& state);

}  // namespace q2
