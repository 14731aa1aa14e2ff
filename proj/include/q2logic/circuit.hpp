#pragma once

#include "q2logic/gate_matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace q2 {

enum class GateKind : std::uint8_t { unary, controlled };

// One primitive gate: a single-qubit unitary, optionally conditioned on one
// control qubit. For controlled gates the matrix acts on the target when the
// control is 1.
struct Gate {
    std::uint32_t id = 0;
    GateKind kind = GateKind::unary;
    int target = 0;
    int control = -1;  // valid iff kind == controlled
    GateMatrix matrix;
    std::string label;  // opaque source tag for reports

    bool is_controlled() const { return kind == GateKind::controlled; }
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;  // ids are 0..size-1 in program order

    std::size_t cnot_like_count() const;  // controlled gates
};

// Per-qubit collision dependencies: preds(g) holds the most recent earlier
// gate touching each qubit g touches (0, 1 or 2 entries, duplicates merged).
struct DepDag {
    std::vector<std::vector<std::uint32_t>> preds;
    std::vector<std::vector<std::uint32_t>> succs;

    std::size_t size() const { return preds.size(); }
};

DepDag build_dag(const Circuit& circuit);

// All gates not in `done` whose predecessors all are, ascending id.
// `done` must be closed under preds.
std::vector<std::uint32_t> ready_frontier(const DepDag& dag,
                                          const std::vector<bool>& done);

// Graphviz rendering of the dependency structure.
std::string to_dot(const Circuit& circuit, const DepDag& dag);

}  // namespace q2
